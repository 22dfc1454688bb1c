#include "cnc/arith.hpp"
#include "cnc/census.hpp"
#include "cnc/delta.hpp"
#include "cnc/density.hpp"
#include "cnc/errors.hpp"
#include "cnc/parallel.hpp"
#include "cnc/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace cnc;
using nlohmann::ordered_json;

namespace {

double d(long double v) { return static_cast<double>(v); }

std::vector<long double> parse_xi_list(const std::string& s) {
    std::vector<long double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stold(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw Error(ErrorKind::Validation, "bad xi value '" + tok + "'");
        }
    }
    if (out.empty()) throw Error(ErrorKind::Validation, "empty xi list");
    return out;
}

std::array<i64, 4> parse_poly(const std::string& s) { return parse_form(s).a; }

CubicField field_from(const std::string& spec) {
    if (auto b = parse_builtin(spec)) return make_builtin_field(*b);
    return make_field(parse_poly(spec));
}

// The field is given directly, or by a conductor with a built-in field.
CubicField resolve_field(u64 q, const std::string& field) {
    if (!field.empty()) {
        CubicField K = field_from(field);
        if (q != 0 && static_cast<u64>(K.conductor_q) != q)
            throw Error(ErrorKind::Validation, "--q does not match the conductor of --field");
        return K;
    }
    for (auto b : {BuiltinField::Q7, BuiltinField::Q9, BuiltinField::Q13}) {
        CubicField K = make_builtin_field(b);
        if (static_cast<u64>(K.conductor_q) == q) return K;
    }
    throw Error(ErrorKind::Validation, "no built-in field of conductor " + std::to_string(q) + "; pass --field");
}

ordered_json factorization_json(const Factorization& f) {
    ordered_json a = ordered_json::array();
    for (const auto& pp : f) a.push_back({pp.p, pp.k});
    return a;
}

void emit(const ordered_json& j, const std::string& path) {
    const std::string text = j.dump(2) + "\n";
    std::cout << text;
    if (!path.empty()) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error(ErrorKind::Validation, "cannot write " + path);
        out << text;
    }
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Validation, "cannot write " + path);
    out << text;
}

ordered_json density_json(const DensityReport& r, const std::vector<KqLimitStep>& lim, int lim_k) {
    ordered_json primes = ordered_json::array();
    for (const auto& p : r.primes) primes.push_back({{"p", p.p}, {"kp", d(p.kp)}, {"nu_max", p.nu_max}, {"tail", d(p.tail)}});
    ordered_json limit = ordered_json::array();
    for (const auto& st : lim) limit.push_back({{"k", st.k}, {"count", st.count}, {"value", d(st.value)}, {"tail", d(st.tail)}});
    return {{"h4", {{"irreducible_over_Q", r.h4.over_q}, {"irreducible_over_K", r.h4.over_k}, {"reason", r.h4.reason}}},
            {"tol", d(r.tol)},
            {"p_max", r.p_max},
            {"primes", primes},
            {"kq_wsum",
             {{"value", d(r.kq.value)},
              {"cap", r.kq.cap},
              {"tail_d", d(r.kq.tail_d)},
              {"tail_d1", d(r.kq.tail_d1)},
              {"tail_d2_bound", d(r.kq.tail_d2)},
              {"w_evaluations", r.kq.w_evaluations}}},
            {"kq_limit", {{"k_max", lim_k}, {"steps", limit}}},
            {"euler_product", d(r.euler_product)},
            {"euler_product_doubled_p_max", d(r.euler_product_doubled)},
            {"tail_estimate", d(r.tail_estimate)},
            {"k_total", d(r.k_total)},
            {"l_product", d(r.l_product)}};
}

// Largest k <= 4 within the limit-route budget.
int default_limit_k(u64 q) {
    int k = 0;
    while (k < 4 && std::pow(static_cast<long double>(q), 2 * (k + 1)) <= 1e9L) ++k;
    return k;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cubic norm census: ideal counts of binary cubic form values in cyclic cubic fields"};
    app.require_subcommand(1);
    int threads = 0;
    bool timings = false;
    app.add_option("--threads", threads, "worker threads (CNC_THREADS overrides)")->check(CLI::NonNegativeNumber);
    app.add_flag("--timings", timings, "include wall-clock seconds in JSON output");

    // field
    auto* f_cmd = app.add_subcommand("field", "field data: discriminant, conductor, norm form");
    std::string f_builtin, f_poly;
    auto* f_b = f_cmd->add_option("--builtin", f_builtin, "q7, q9 or q13");
    auto* f_p = f_cmd->add_option("--poly", f_poly, "monic cubic 1,a,b,c");
    f_b->excludes(f_p);

    // char
    auto* c_cmd = app.add_subcommand("char", "cubic character table and kernel");
    u64 c_q = 7;
    bool c_lvalue = false;
    double c_tol = 1e-8;
    c_cmd->add_option("--q", c_q, "modulus")->required();
    c_cmd->add_flag("--lvalue", c_lvalue, "also evaluate L(1,chi) L(1,chi^2)");
    c_cmd->add_option("--tol", c_tol, "series tolerance")->check(CLI::PositiveNumber);

    // r3
    auto* r_cmd = app.add_subcommand("r3", "number of ideals of norm n");
    u64 r_q = 7, r_n = 1;
    r_cmd->add_option("--q", r_q, "conductor")->required();
    r_cmd->add_option("--n", r_n, "n >= 1")->required()->check(CLI::PositiveNumber);

    // rho
    auto* h_cmd = app.add_subcommand("rho", "root counts of F modulo s");
    std::string h_form;
    u64 h_s = 1;
    h_cmd->add_option("--form", h_form, "a0,a1,a2,a3")->required();
    h_cmd->add_option("--s", h_s, "modulus")->required()->check(CLI::PositiveNumber);

    // delta
    auto* d_cmd = app.add_subcommand("delta", "Hooley Delta_3 by exact sweep");
    u64 d_n = 1, d_q = 7;
    std::string d_w = "unit";
    d_cmd->add_option("--n", d_n, "n >= 1")->required()->check(CLI::PositiveNumber);
    d_cmd->add_option("--weights", d_w, "unit or char")->check(CLI::IsMember({"unit", "char"}));
    d_cmd->add_option("--q", d_q, "conductor for char weights");

    // moments
    auto* m_cmd = app.add_subcommand("moments", "moment sums of Delta_3");
    u64 m_x = 1000, m_q = 7;
    double m_y = 1.0;
    std::string m_mode = "plain", m_csv;
    m_cmd->add_option("--x", m_x, "upper limit")->required()->check(CLI::PositiveNumber);
    m_cmd->add_option("--y", m_y, "weight y^omega(n)");
    m_cmd->add_option("--mode", m_mode, "plain or char_squared")->check(CLI::IsMember({"plain", "char_squared"}));
    m_cmd->add_option("--q", m_q, "conductor");
    m_cmd->add_option("--csv", m_csv, "checkpoint CSV path");

    // density
    auto* k_cmd = app.add_subcommand("density", "local densities and K(F)");
    u64 k_q = 0, k_pmax = 1000;
    std::string k_field, k_form, k_json;
    double k_tol = 1e-12;
    int k_cap = 8, k_lim = -1;
    k_cmd->add_option("--q", k_q, "conductor of a built-in field");
    k_cmd->add_option("--field", k_field, "builtin name or monic cubic");
    k_cmd->add_option("--form", k_form, "a0,a1,a2,a3")->required();
    k_cmd->add_option("--pmax", k_pmax, "Euler product cutoff");
    k_cmd->add_option("--tol", k_tol, "K_p series tolerance")->check(CLI::PositiveNumber);
    k_cmd->add_option("--wsum-cap", k_cap, "divisor exponent cap for the W-sum")->check(CLI::Range(0, 16));
    k_cmd->add_option("--limit-k", k_lim, "k_max of the limit route (default: largest within budget, at most 4)");
    k_cmd->add_option("--json", k_json, "also write the report here");

    // count
    auto* n_cmd = app.add_subcommand("count", "census Q(F, xi, R) against the main term");
    u64 n_q = 0, n_pmax = 1000;
    std::string n_field, n_form, n_region = "disc:1.0", n_xi, n_csv, n_json;
    double n_tol = 1e-12;
    n_cmd->add_option("--q", n_q, "conductor of a built-in field");
    n_cmd->add_option("--field", n_field, "builtin name or monic cubic");
    n_cmd->add_option("--form", n_form, "a0,a1,a2,a3")->required();
    n_cmd->add_option("--region", n_region, "disc:R or ellipse:A,B");
    n_cmd->add_option("--xi", n_xi, "ascending comma list")->required();
    n_cmd->add_option("--pmax", n_pmax, "Euler product cutoff");
    n_cmd->add_option("--tol", n_tol, "K_p series tolerance")->check(CLI::PositiveNumber);
    n_cmd->add_option("--csv", n_csv, "CSV path");
    n_cmd->add_option("--json", n_json, "JSON path");

    // verify
    auto* v_cmd = app.add_subcommand("verify", "oracle suite or a single identity");
    std::string v_level = "quick", v_identity, v_json, v_form = "1,0,0,2", v_region = "disc:1.0";
    std::vector<int> v_ids;
    u64 v_q = 7, v_seed = kDefaultSeed;
    double v_xi = 20;
    v_cmd->add_option("--level", v_level, "quick or full")->check(CLI::IsMember({"quick", "full"}));
    v_cmd->add_option("--criteria", v_ids, "subset of 1..10")->delimiter(',')->check(CLI::Range(1, kVerifyCriteria));
    v_cmd->add_option("--seed", v_seed, "seed of the sampled checks");
    v_cmd->add_option("--json", v_json, "also write the report here");
    v_cmd->add_option("--identity", v_identity, "q-decomposition")->check(CLI::IsMember({"q-decomposition"}));
    v_cmd->add_option("--xi", v_xi, "dilation for --identity")->check(CLI::PositiveNumber);
    v_cmd->add_option("--q", v_q, "conductor for --identity");
    v_cmd->add_option("--form", v_form, "form for --identity");
    v_cmd->add_option("--region", v_region, "region for --identity");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    if (threads > 0) set_thread_count(threads);
    if (const char* env = std::getenv("CNC_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n < 1) throw std::invalid_argument(env);
            set_thread_count(n);
        } catch (const std::exception&) {
            std::cerr << "error: CNC_THREADS must be a positive integer\n";
            return 1;
        }
    }

    const auto t0 = std::chrono::steady_clock::now();
    auto stamp = [&](ordered_json& j) {
        if (timings) j["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    try {
        if (*f_cmd) {
            if (f_builtin.empty() && f_poly.empty()) throw Error(ErrorKind::Validation, "field needs --builtin or --poly");
            const CubicField K = f_builtin.empty() ? make_field(parse_poly(f_poly)) : field_from(f_builtin);
            if (!f_builtin.empty() && !parse_builtin(f_builtin)) throw Error(ErrorKind::Validation, "unknown builtin " + f_builtin);
            ordered_json j = {{"schema", 1},
                              {"poly", K.coeffs},
                              {"disc", K.disc},
                              {"conductor", K.conductor_q},
                              {"norm_form_coeffs", K.norm_form.coeffs},
                              {"norm_form_monomials", kNormMonomials},
                              {"power_basis", K.power_basis},
                              {"principal_assumed", K.principal_assumed},
                              {"warnings", K.warnings}};
            stamp(j);
            emit(j, "");
        } else if (*c_cmd) {
            const auto c = character_mod(c_q);
            ordered_json table = ordered_json::array();
            for (auto e : c.table()) table.push_back(e == CubicCharacter::kZero ? ordered_json(nullptr) : ordered_json(static_cast<int>(e)));
            ordered_json j = {{"schema", 1}, {"q", c_q}, {"exponents", table}, {"kernel", c.kernel()},
                              {"note", "chi(n) = omega^e; null where gcd(n, q) > 1"}};
            if (c_lvalue) {
                const auto l = l_value_product(c, static_cast<long double>(c_tol));
                j["lvalue"] = {{"l1_closed", {d(l.l1_closed.real()), d(l.l1_closed.imag())}},
                               {"l1_series", {d(l.l1_series.real()), d(l.l1_series.imag())}},
                               {"product", d(l.product)},
                               {"discrepancy", d(l.discrepancy)},
                               {"series_terms", l.series_terms},
                               {"tol", c_tol}};
            }
            stamp(j);
            emit(j, "");
        } else if (*r_cmd) {
            const auto c = character_mod(r_q);
            const Factorization f = factor(r_n);
            ordered_json j = {{"schema", 1}, {"q", r_q}, {"n", r_n}, {"factorization", factorization_json(f)}, {"r3", r3(c, f)}};
            stamp(j);
            emit(j, "");
        } else if (*h_cmd) {
            const auto F = parse_form(h_form);
            ordered_json j = {{"schema", 1},         {"form", F.str()},           {"s", h_s},
                              {"rho_minus", rho_minus(F, h_s)}, {"rho_plus", rho_plus(F, h_s)}, {"rho_star", rho_star(F, h_s)}};
            stamp(j);
            emit(j, "");
        } else if (*d_cmd) {
            const auto c = character_mod(d_q);
            const bool ch = d_w == "char";
            const auto r = delta3(d_n, ch ? DeltaWeights::Char : DeltaWeights::Unit, ch ? &c : nullptr);
            ordered_json j = {{"schema", 1},
                              {"n", d_n},
                              {"weights", d_w},
                              {"q", ch ? ordered_json(d_q) : ordered_json(nullptr)},
                              {"sup_norm_sq", r.sup_norm_sq},
                              {"value", {{"a", r.value.a}, {"b", r.value.b}, {"basis", "a + b omega"}}},
                              {"witness", {{"u1", d(r.witness.u1)}, {"v1", d(r.witness.v1)}, {"u2", d(r.witness.u2)}, {"v2", d(r.witness.v2)}}},
                              {"ranges", r.ranges},
                              {"exact", true}};
            stamp(j);
            emit(j, "");
        } else if (*m_cmd) {
            const auto c = character_mod(m_q);
            const auto r = moment_sum(m_x, static_cast<long double>(m_y), c, m_mode == "plain" ? MomentMode::Plain : MomentMode::CharSquared);
            ordered_json cps = ordered_json::array();
            std::ostringstream csv;
            csv << "x,sum\r\n" << std::setprecision(17);
            for (const auto& [x, s] : r.checkpoints) {
                cps.push_back({x, d(s)});
                csv << x << ',' << d(s) << "\r\n";
            }
            ordered_json j = {{"schema", 1},
                              {"x", r.x},
                              {"y", d(r.y)},
                              {"mode", m_mode},
                              {"q", m_q},
                              {"sum", d(r.sum)},
                              {"checkpoints", cps},
                              {"slope", d(r.slope)},
                              {"predicted_exponent", d(r.predicted_exponent)},
                              {"rho", d(r.rho)},
                              {"note", "slope is a least squares fit over the checkpoints, a trend diagnostic"}};
            if (!m_csv.empty()) write_file(m_csv, csv.str());
            stamp(j);
            emit(j, "");
        } else if (*k_cmd) {
            const CubicField K = resolve_field(k_q, k_field);
            const auto c = character_for_field(K);
            const auto F = parse_form(k_form);
            const auto rep = k_total(F, c, K, k_pmax, static_cast<long double>(k_tol), k_cap);
            const int lim_k = k_lim >= 0 ? k_lim : default_limit_k(c.modulus());
            const auto lim = lim_k > 0 ? kq_limit(F, c, lim_k) : std::vector<KqLimitStep>{};
            ordered_json j = {{"schema", 1}, {"q", c.modulus()}, {"form", F.str()}};
            const ordered_json body = density_json(rep, lim, lim_k);
            for (const auto& [key, val] : body.items()) j[key] = val;
            stamp(j);
            emit(j, k_json);
        } else if (*n_cmd) {
            const CubicField K = resolve_field(n_q, n_field);
            const auto c = character_for_field(K);
            const auto F = parse_form(n_form);
            const auto R = parse_region(n_region);
            DensityConfig cfg;
            cfg.p_max = n_pmax;
            cfg.tol = static_cast<long double>(n_tol);
            const auto rep = convergence_run(F, c, K, R, parse_xi_list(n_xi), cfg, timings);
            ordered_json rows = ordered_json::array();
            for (const auto& r : rep.rows) {
                ordered_json row = {{"xi", d(r.xi)},          {"points", r.points}, {"Q", r.q},
                                    {"main_term", d(r.main_term)}, {"ratio", d(r.ratio)}, {"window_ok", r.window_ok}};
                row["stability"] = r.stability ? ordered_json(d(*r.stability)) : ordered_json(nullptr);
                if (timings) row["seconds"] = d(r.seconds);
                rows.push_back(row);
            }
            ordered_json j = {{"schema", 1},
                              {"q", c.modulus()},
                              {"form", F.str()},
                              {"region", R.describe()},
                              {"sign_convention", "r3(|F(x)|), origin excluded"},
                              {"traversal_orders_agree", true},
                              {"constants",
                               {{"k_total", d(rep.density.k_total)},
                                {"l_product", d(rep.density.l_product)},
                                {"vol", d(rep.volume)},
                                {"sigma", d(rep.sigma)},
                                {"theta", d(rep.theta)},
                                {"p_max", rep.density.p_max},
                                {"euler_tail_estimate", d(rep.density.tail_estimate)},
                                {"kq_tail", d(rep.density.kq.tail())},
                                {"tol", n_tol}}},
                              {"rows", rows},
                              {"warnings", rep.warnings}};
            if (timings) {
                j["factor_time_histogram"] = {{"buckets", {"<1us", "<10us", "<100us", "<1ms", ">=1ms"}}, {"counts", rep.factor_times}};
            }
            if (!n_csv.empty()) write_file(n_csv, census_csv(rep));
            stamp(j);
            emit(j, n_json);
        } else if (*v_cmd) {
            if (!v_identity.empty()) {
                ordered_json j = verify_q_decomposition(parse_form(v_form), v_q, parse_region(v_region), static_cast<long double>(v_xi));
                j["schema"] = 1;
                j["identity"] = v_identity;
                std::cerr << (j["pass"].get<bool>() ? "PASS" : "FAIL") << "  q-decomposition  Q = " << j["Q"] << ", Q1 = " << j["Q1"]
                          << ", branches = " << j["branch_total"] << ", axis = " << j["axis_term"] << "\n";
                stamp(j);
                emit(j, v_json);
                return j["pass"].get<bool>() ? 0 : 3;
            }
            const VerifyLevel lv = v_level == "full" ? VerifyLevel::Full : VerifyLevel::Quick;
            if (v_ids.empty())
                for (int i = 1; i <= kVerifyCriteria; ++i) v_ids.push_back(i);
            const auto results = run_verify(lv, v_ids, v_seed);
            for (const auto& r : results)
                std::cerr << (r.pass ? "PASS" : "FAIL") << "  " << std::setw(2) << r.id << "  " << r.title << "  (" << r.cases << " cases, "
                          << r.failures << " failures)\n";
            ordered_json j = verify_json(results, lv, timings);
            emit(j, v_json);
            return j["pass"].get<bool>() ? 0 : 3;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::logic_error& e) {
        std::cerr << "internal check failed: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
