// Command-line front end: exact Toeplitz matrices on weighted-oscillator
// eigenspaces, reduction diagnostics, twisted-sector spectral models, and
// the Bohr-Sommerfeld lattice enumerator.
//
// Exit codes: 0 ok, 1 verification failure, 2 bad input, 3 numerical
// non-convergence.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "oscred/polytope.hpp"
#include "oscred/quadrature.hpp"
#include "oscred/reduction.hpp"
#include "oscred/spectra.hpp"
#include "oscred/verify.hpp"

using json = nlohmann::ordered_json;
using namespace oscred;

namespace {

constexpr int kSchemaVersion = 1;

struct KRange {
    long long start = 1, stop = 1, step = 1;
    std::vector<long long> values() const {
        std::vector<long long> v;
        for (long long k = start; k <= stop; k += step) v.push_back(k);
        return v;
    }
};

long long parse_int(const std::string& text, const char* what) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string(what) + ": expected integer, got '" +
                                    text + "'");
    }
}

KRange parse_krange(const std::string& text) {
    KRange r;
    const auto c1 = text.find(':');
    if (c1 == std::string::npos) {
        r.start = r.stop = parse_int(text, "--k");
        return r;
    }
    const auto c2 = text.find(':', c1 + 1);
    r.start = parse_int(text.substr(0, c1), "--k");
    if (c2 == std::string::npos) {
        r.stop = parse_int(text.substr(c1 + 1), "--k");
    } else {
        r.stop = parse_int(text.substr(c1 + 1, c2 - c1 - 1), "--k");
        r.step = parse_int(text.substr(c2 + 1), "--k");
    }
    if (r.step < 1 || r.stop < r.start)
        throw std::invalid_argument("--k: empty or descending k range");
    return r;
}

std::vector<long long> parse_weights(const std::string& text) {
    std::vector<long long> p;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto next = text.find(',', pos);
        if (next == std::string::npos) next = text.size();
        p.push_back(parse_int(text.substr(pos, next - pos), "--weights"));
        pos = next + 1;
    }
    return p;
}

void emit(const std::string& out_path, const std::string& payload) {
    if (out_path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream os(out_path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output path " + out_path);
    os << payload;
}

std::string csv_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct CommonOpts {
    std::string weights = "1,1";
    std::string krange = "1:1:1";
    std::string symbol = "s(1)";
    std::vector<std::string> fs;
    long long fit_order = -1;  // default: dim of the principal sector
    std::string format = "json";
    std::string output;
    std::uint64_t seed = 424242;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_symbol) {
    cmd->add_option("--weights", o.weights, "comma-separated circle weights");
    cmd->add_option("--k", o.krange, "k or start:stop:step");
    if (needs_symbol) cmd->add_option("--symbol", o.symbol, "symbol expression");
    cmd->add_option("--format", o.format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--output,-o", o.output, "output path (default stdout)");
    cmd->add_option("--seed", o.seed, "deterministic seed");
}

json sector_json(const AsymptoticModel& model) {
    json arr = json::array();
    for (std::size_t s = 0; s < model.sectors.size(); ++s) {
        const auto& sec = model.sectors[s];
        json b = json::array();
        for (const auto& bi : sec.b) b.push_back({{"j", bi.j}, {"q", bi.q}});
        json coeffs = json::array();
        for (const auto& cc : model.coeffs[s]) coeffs.push_back({cc.real(), cc.imag()});
        arr.push_back({{"zeta", {{"j", sec.zeta.j}, {"q", sec.zeta.q}}},
                       {"support", sec.support},
                       {"multiplicity", sec.multiplicity},
                       {"dim", sec.dim_n},
                       {"b", b},
                       {"coeffs", coeffs}});
    }
    return arr;
}

// ------------------------------------------------------------------ commands

int cmd_dim(const CommonOpts& o) {
    const WeightVector w(parse_weights(o.weights));
    const KRange kr = parse_krange(o.krange);
    const auto ks = kr.values();

    AsymptoticModel model = make_model(w, PolySymbol::constant(w.n(), 1.0),
                                       RealPolynomial({1.0}));
    std::vector<std::pair<long long, double>> data;
    for (long long k : ks) data.emplace_back(k, double(count_dim(w, k)));
    const long long order = (o.fit_order >= 0) ? o.fit_order : (long long)w.n() - 1;
    FitReport fit{model, 0.0, 0, 0};
    if (data.size() >= 2 && order >= 1) fit = fit_subleading(data, model, order);

    if (o.format == "csv") {
        std::string csv = "k,dim,model,residual\n";
        for (const auto& [k, v] : data) {
            const double mv = model_eval(fit.model, k);
            csv += std::to_string(k) + "," + std::to_string((long long)v) + "," +
                   csv_double(mv) + "," + csv_double(std::abs(v - mv)) + "\n";
        }
        emit(o.output, csv);
        return 0;
    }
    json out;
    out["schema_version"] = kSchemaVersion;
    out["command"] = "dim";
    out["weights"] = parse_weights(o.weights);
    out["sectors"] = sector_json(fit.model);
    json rows = json::array();
    for (const auto& [k, v] : data) {
        const double mv = model_eval(fit.model, k);
        rows.push_back({{"k", k},
                        {"dim", (long long)v},
                        {"model", mv},
                        {"residual", std::abs(v - mv)}});
    }
    out["rows"] = rows;
    emit(o.output, out.dump(2) + "\n");
    return 0;
}

int cmd_basis(const CommonOpts& o) {
    const WeightVector w(parse_weights(o.weights));
    const KRange kr = parse_krange(o.krange);
    const EigenspaceBasis basis = enumerate_basis(w, kr.start);
    if (o.format == "csv") {
        std::string csv = "index,alpha,norm_sq\n";
        for (std::size_t i = 0; i < basis.dim(); ++i) {
            std::string a;
            for (std::size_t j = 0; j < w.n(); ++j)
                a += (j ? " " : "") + std::to_string(basis.indices[i][j]);
            csv += std::to_string(i) + "," + a + "," + csv_double(basis.norms_sq[i]) + "\n";
        }
        emit(o.output, csv);
        return 0;
    }
    json out;
    out["schema_version"] = kSchemaVersion;
    out["command"] = "basis";
    out["weights"] = parse_weights(o.weights);
    out["k"] = kr.start;
    out["dim"] = basis.dim();
    json rows = json::array();
    for (std::size_t i = 0; i < basis.dim(); ++i)
        rows.push_back({{"alpha", basis.indices[i]}, {"norm_sq", basis.norms_sq[i]}});
    out["rows"] = rows;
    emit(o.output, out.dump(2) + "\n");
    return 0;
}

int cmd_op(const CommonOpts& o) {
    const WeightVector w(parse_weights(o.weights));
    const KRange kr = parse_krange(o.krange);
    const PolySymbol f = parse_symbol(o.symbol, w.n());
    const EigenspaceBasis basis = enumerate_basis(w, kr.start);
    const OperatorMatrix op = toeplitz_matrix(f, basis);
    if (o.format == "csv") {
        std::string csv = "row,col,re,im\n";
        for (std::size_t i = 0; i < basis.dim(); ++i)
            for (std::size_t j = 0; j < basis.dim(); ++j) {
                const cplx v = op.entries(i, j);
                if (v == cplx(0.0)) continue;
                csv += std::to_string(i) + "," + std::to_string(j) + "," +
                       csv_double(v.real()) + "," + csv_double(v.imag()) + "\n";
            }
        emit(o.output, csv);
        return 0;
    }
    json out;
    out["schema_version"] = kSchemaVersion;
    out["command"] = "op";
    out["weights"] = parse_weights(o.weights);
    out["k"] = kr.start;
    out["symbol"] = f.render();
    out["dim"] = basis.dim();
    json rows = json::array();
    for (std::size_t i = 0; i < basis.dim(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < basis.dim(); ++j)
            row.push_back({op.entries(i, j).real(), op.entries(i, j).imag()});
        rows.push_back(row);
    }
    out["entries"] = rows;
    emit(o.output, out.dump(2) + "\n");
    return 0;
}

int cmd_reduce(const CommonOpts& o) {
    const WeightVector w(parse_weights(o.weights));
    const KRange kr = parse_krange(o.krange);
    json rows = json::array();
    std::string csv = "k,min_d,max_d,vstar_deviation\n";
    for (long long k : kr.values()) {
        const EigenspaceBasis basis = enumerate_basis(w, k);
        if (basis.dim() == 0) continue;
        const ReductionMaps maps = build_reduction_maps(basis);
        double lo = maps.v_diag[0], hi = maps.v_diag[0];
        for (double d : maps.v_diag) {
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
        const double dev = (basis.dim() >= 3) ? vstar_v_symbol_check(basis) : 0.0;
        rows.push_back({{"k", k},
                        {"dim", basis.dim()},
                        {"v_diag", maps.v_diag},
                        {"min_d", lo},
                        {"max_d", hi},
                        {"vstar_deviation", dev}});
        csv += std::to_string(k) + "," + csv_double(lo) + "," + csv_double(hi) + "," +
               csv_double(dev) + "\n";
    }
    if (o.format == "csv") {
        emit(o.output, csv);
        return 0;
    }
    json out;
    out["schema_version"] = kSchemaVersion;
    out["command"] = "reduce";
    out["weights"] = parse_weights(o.weights);
    out["calibration"] = stirling_calibration();
    out["rows"] = rows;
    emit(o.output, out.dump(2) + "\n");
    return 0;
}

int cmd_sectors(const CommonOpts& o) {
    const WeightVector w(parse_weights(o.weights));
    const PolySymbol g0 = average_circle(parse_symbol(o.symbol, w.n()), w);
    const RealPolynomial f =
        o.fs.empty() ? RealPolynomial({1.0}) : RealPolynomial::parse(o.fs.front());
    const AsymptoticModel model = make_model(w, g0, f);
    json out;
    out["schema_version"] = kSchemaVersion;
    out["command"] = "sectors";
    out["weights"] = parse_weights(o.weights);
    out["g0"] = g0.render();
    out["f"] = f.render();
    out["sectors"] = sector_json(model);
    emit(o.output, out.dump(2) + "\n");
    return 0;
}

int cmd_density(const CommonOpts& o, bool with_eigenvalues) {
    const WeightVector w(parse_weights(o.weights));
    const PolySymbol f = parse_symbol(o.symbol, w.n());
    const auto ks = parse_krange(o.krange).values();
    std::vector<RealPolynomial> fs;
    if (o.fs.empty())
        fs.push_back(RealPolynomial({0.0, 1.0}));
    else
        for (const auto& t : o.fs) fs.push_back(RealPolynomial::parse(t));
    const long long order = (o.fit_order >= 0) ? o.fit_order : (long long)w.n() - 1;
    const DensityComparison cmp = density_compare(w, f, fs, ks, order);

    if (o.format == "csv") {
        std::string csv = "k,dim,f,exact_sum,model,residual\n";
        for (const auto& rep : cmp.reports)
            for (const auto& [fname, sum] : rep.f_moments)
                csv += std::to_string(rep.k) + "," + std::to_string(rep.eigenvalues.size()) +
                       ",\"" + fname + "\"," + csv_double(sum) + "," +
                       csv_double(rep.model_values.at(fname)) + "," +
                       csv_double(rep.residuals.at(fname)) + "\n";
        emit(o.output, csv);
        return 0;
    }
    // JSON lines: one object per k
    std::string payload;
    for (const auto& rep : cmp.reports) {
        json row;
        row["schema_version"] = kSchemaVersion;
        row["k"] = rep.k;
        row["dim"] = rep.eigenvalues.size();
        if (with_eigenvalues) row["eigenvalues"] = rep.eigenvalues;
        row["sums"] = rep.f_moments;
        row["model"] = rep.model_values;
        row["residual"] = rep.residuals;
        payload += row.dump() + "\n";
    }
    json summary;
    summary["schema_version"] = kSchemaVersion;
    summary["out_of_sample_order"] = cmp.out_of_sample_order;
    summary["max_out_residual"] = cmp.max_out_residual;
    payload += summary.dump() + "\n";
    emit(o.output, payload);
    return 0;
}

int cmd_polytope(const CommonOpts& o, const std::string& matrix_text) {
    TorusAction act;
    act.weight_rows.clear();
    std::size_t pos = 0;
    while (pos < matrix_text.size()) {
        auto next = matrix_text.find(';', pos);
        if (next == std::string::npos) next = matrix_text.size();
        act.weight_rows.push_back(parse_weights(matrix_text.substr(pos, next - pos)));
        pos = next + 1;
    }
    if (act.weight_rows.empty())
        throw CLI::ValidationError("--matrix", "empty weight matrix");
    act.d = act.weight_rows.front().size();
    const MomentumPolytope poly = fixed_point_values(act);
    const long long k = parse_krange(o.krange).start;
    const auto pts = bs_lattice_points(poly, k);

    if (o.format == "csv") {
        std::string csv;
        for (std::size_t i = 0; i < poly.d; ++i)
            csv += (i ? "," : "") + ("lambda_" + std::to_string(i + 1) + "/2pi");
        csv += "\n";
        for (const auto& pt : pts) {
            for (std::size_t i = 0; i < poly.d; ++i)
                csv += (i ? "," : "") + csv_double(pt[i].to_double());
            csv += "\n";
        }
        emit(o.output, csv);
        return 0;
    }
    json out;
    out["schema_version"] = kSchemaVersion;
    out["command"] = "polytope";
    out["k"] = k;
    json verts = json::array();
    for (const auto& v : poly.vertices) {
        json vv = json::array();
        for (const auto& x : v) vv.push_back(x.to_string());
        verts.push_back(vv);
    }
    out["vertices_over_2pi"] = verts;
    json points = json::array();
    for (const auto& pt : pts) {
        json pp = json::array();
        for (const auto& x : pt) pp.push_back(x.to_string());
        points.push_back(pp);
    }
    out["count"] = pts.size();
    out["points_over_2pi"] = points;
    emit(o.output, out.dump(2) + "\n");
    return 0;
}

int cmd_verify(const std::string& only, double perturb, std::uint64_t seed,
               const std::string& output) {
    VerifyOptions opts;
    opts.only = only;
    opts.perturb = perturb;
    opts.seed = seed;
    const auto results = run_verification(opts);
    std::string payload;
    bool all_pass = true;
    for (const auto& r : results) {
        all_pass = all_pass && r.pass;
        char line[256];
        std::snprintf(line, sizeof(line), "%-4s criterion %2d %-36s (%.2fs)\n",
                      r.pass ? "PASS" : "FAIL", r.criterion, r.name.c_str(), r.seconds);
        payload += line;
        if (!r.detail.empty()) payload += "     " + r.detail + "\n";
    }
    emit(output, payload);
    if (results.empty()) {
        std::cerr << "no checks matched the --only filter\n";
        return 2;
    }
    return all_pass ? 0 : 1;
}

// Flat key=value config support with precedence flags > config > defaults:
// config entries become trailing "--key value" tokens, skipping any key the
// command line already set.
std::vector<std::string> apply_config(const std::vector<std::string>& args) {
    std::string path;
    std::vector<std::string> out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size())
                throw std::invalid_argument("--config: missing file path");
            path = args[++i];
            continue;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            continue;
        }
        out.push_back(args[i]);
    }
    if (path.empty()) return out;

    std::ifstream is(path);
    if (!is) throw std::invalid_argument("--config: cannot open " + path);
    std::string line;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r\"");
            const auto b = s.find_last_not_of(" \t\r\"");
            return (a == std::string::npos) ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) continue;
        const std::string flag = "--" + key;
        bool already = false;
        for (const auto& a : out)
            if (a == flag || a.rfind(flag + "=", 0) == 0) already = true;
        if (already) continue;
        out.push_back(flag);
        out.push_back(value);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted-oscillator quantization and reduction toolkit"};
    app.require_subcommand(1);
    app.footer("--config FILE   flat key=value defaults for the chosen command (flags win)");

    CommonOpts dim_o, basis_o, op_o, reduce_o, density_o, sectors_o, poly_o;
    bool density_eigs = false;
    std::string poly_matrix = "1,1;3,0;0,3;0,0";
    std::string verify_only;
    double verify_perturb = 0.0;
    std::uint64_t verify_seed = 424242;
    std::string verify_output;

    auto* cdim = app.add_subcommand("dim", "eigenspace dimensions vs the sector model");
    add_common(cdim, dim_o, false);
    cdim->add_option("--fit-order", dim_o.fit_order, "highest fitted order");

    auto* cbasis = app.add_subcommand("basis", "monomial basis with exact norms");
    add_common(cbasis, basis_o, false);

    auto* cop = app.add_subcommand("op", "Toeplitz matrix of a symbol");
    add_common(cop, op_o, true);

    auto* creduce = app.add_subcommand("reduce", "descent-map diagnostics");
    add_common(creduce, reduce_o, false);

    auto* cdensity = app.add_subcommand("density", "spectral sums vs the sector model");
    add_common(cdensity, density_o, true);
    cdensity->add_option("--f", density_o.fs, "test polynomial in x (repeatable)");
    cdensity->add_option("--fit-order", density_o.fit_order, "highest fitted order");
    cdensity->add_flag("--eigenvalues", density_eigs, "include eigenvalue lists");

    auto* csectors = app.add_subcommand("sectors", "twisted sectors and leading coefficients");
    add_common(csectors, sectors_o, true);
    csectors->add_option("--f", sectors_o.fs, "test polynomial in x");

    auto* cpoly = app.add_subcommand("polytope", "momentum polytope lattice points");
    add_common(cpoly, poly_o, false);
    cpoly->add_option("--matrix", poly_matrix, "weight rows, e.g. 1,1;3,0;0,3;0,0");

    auto* cverify = app.add_subcommand("verify", "run the acceptance suite");
    cverify->add_option("--only", verify_only, "restrict to a module or check name");
    cverify->add_option("--perturb", verify_perturb, "failure injection magnitude");
    cverify->add_option("--seed", verify_seed, "deterministic seed");
    cverify->add_option("--output,-o", verify_output, "output path (default stdout)");

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = apply_config(args);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (cdim->parsed()) return cmd_dim(dim_o);
        if (cbasis->parsed()) return cmd_basis(basis_o);
        if (cop->parsed()) return cmd_op(op_o);
        if (creduce->parsed()) return cmd_reduce(reduce_o);
        if (cdensity->parsed()) return cmd_density(density_o, density_eigs);
        if (csectors->parsed()) return cmd_sectors(sectors_o);
        if (cpoly->parsed()) return cmd_polytope(poly_o, poly_matrix);
        if (cverify->parsed())
            return cmd_verify(verify_only, verify_perturb, verify_seed, verify_output);
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const QuadratureError& e) {
        std::cerr << "numerical non-convergence: " << e.what()
                  << " (achieved error " << e.partial_result.error_estimate << ")\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
