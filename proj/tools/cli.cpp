#include "cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "ffm/acceptance.hpp"
#include "ffm/charfamily.hpp"
#include "ffm/density.hpp"
#include "ffm/eulerprod.hpp"
#include "ffm/ffpoly.hpp"
#include "ffm/moments.hpp"
#include "ffm/repr.hpp"
#include "ffm/unitary.hpp"

#ifndef FFM_VERSION
#define FFM_VERSION "0.0.0"
#endif

namespace ffm::cli {

using json = nlohmann::ordered_json;

namespace {

json cj(cplx z) { return json::array({z.real(), z.imag()}); }

json cj(const std::vector<cplx>& v) {
    json a = json::array();
    for (cplx z : v) a.push_back(cj(z));
    return a;
}

json rj(const Rational& r) { return to_string(r); }

json qj(const QSqrtScalar& x) { return json{{"a", to_string(x.a())}, {"b", to_string(x.b())}}; }

json ij(const Integer& n) {
    if (n.fits_slong_p()) return n.get_si();
    return n.get_str();
}

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw DomainError("bad number '" + tok + "'");
        out.push_back(v);
    }
    return out;
}

std::vector<int> parse_ints(const std::string& s) {
    std::vector<int> out;
    for (double v : parse_doubles(s)) {
        if (v != static_cast<int>(v)) throw DomainError("expected integers, got " + s);
        out.push_back(static_cast<int>(v));
    }
    return out;
}

// "re,im,re,im,..." -> complex list
std::vector<cplx> parse_points(const std::string& s, const char* flag) {
    auto v = parse_doubles(s);
    if (v.size() % 2) throw DomainError(std::string(flag) + " needs pairs re,im");
    std::vector<cplx> x;
    for (std::size_t i = 0; i < v.size(); i += 2) x.emplace_back(v[i], v[i + 1]);
    return x;
}

// --alpha as re,im pairs, one per shift; empty means all zero
std::vector<cplx> parse_alpha(const std::string& s, int n) {
    if (s.empty()) return std::vector<cplx>(n, 0.0);
    auto a = parse_points(s, "--alpha");
    if (static_cast<int>(a.size()) != n) throw DomainError("--alpha needs r + rt pairs");
    return a;
}

WeightMode parse_mode(const std::string& s) {
    if (s == "fourier") return WeightMode::fourier;
    if (s == "hermite") return WeightMode::hermite;
    throw DomainError("--mode must be fourier or hermite");
}

Functional parse_phi(const std::string& s, int q, int r, int rt, const std::vector<cplx>& alpha) {
    if (s == "one") return phi_one();
    auto colon = s.find(':');
    std::string kind = s.substr(0, colon);
    std::string arg = colon == std::string::npos ? "" : s.substr(colon + 1);
    if (kind == "c") return phi_coeff(std::stoi(arg));
    if (kind == "cbar") return phi_coeff(std::stoi(arg), true);
    if (kind == "abs2") return phi_abs2(std::stoi(arg));
    if (kind == "moment") return phi_moment(q, r, rt, alpha);
    throw DomainError("unknown functional '" + s + "' (one, c:d, cbar:d, abs2:d, moment)");
}

struct Opts {
    int q = 0, N = 0, k = -1, dmax = 0, D = 12, r = 1, rt = 1, K = -1, cutoff = 12, samples = 20000, threads = 1;
    std::uint64_t seed = 1;
    double beta = 0.45, tol = 1e-10;
    std::string hol, anti, p, pbar, x, alpha, mode = "hermite", backend = "gf", group = "core";
    std::vector<std::string> phis;
    bool list = false, compare = false, family = false, probe = false;
    int mc_samples = 0;
    std::string out_path;
};

json echo(const CLI::App* sub) {
    json o;
    o["subcommand"] = sub->get_name();
    json args;
    for (const CLI::Option* opt : sub->get_options()) {
        if (opt == sub->get_help_ptr()) continue;
        std::string name = opt->get_name();
        if (name == "--out") continue;
        while (!name.empty() && name[0] == '-') name.erase(0, 1);
        if (opt->get_type_size() == 0) {
            args[name] = opt->count() > 0;
        } else if (opt->count() > 0) {
            std::string joined;
            for (const auto& v : opt->results()) joined += (joined.empty() ? "" : ",") + v;
            args[name] = joined;
        } else {
            args[name] = opt->get_default_str();
        }
    }
    o["args"] = args;
    return o;
}

json cmd_primes(const Opts& o) {
    if (o.q < 2 || o.dmax < 1) throw DomainError("need --q >= 2 and --dmax >= 1");
    Budget b = Budget::from_env();
    PrimeTable t = o.list ? PrimeTable::build(o.q, o.dmax, b) : PrimeTable::counts(o.q, o.dmax);
    json res;
    json E = json::array(), A = json::array(), B = json::array();
    for (int d = 1; d <= o.dmax; ++d) {
        E.push_back(ij(t.E(d)));
        A.push_back(rj(t.A(d)));
        B.push_back(rj(t.B(d)));
    }
    res["E"] = E;
    res["A"] = A;
    res["B"] = B;
    if (o.list) {
        json P = json::object();
        for (int d = 1; d <= o.dmax; ++d) {
            json l = json::array();
            for (const auto& f : t.primes(d)) l.push_back(f.to_string());
            P[std::to_string(d)] = l;
        }
        res["primes"] = P;
    }
    return res;
}

json cmd_xi(const Opts& o) {
    if (o.q < 2 || o.dmax < 1) throw DomainError("need --q >= 2 and --dmax >= 1");
    PrimeTable t = PrimeTable::counts(o.q, o.dmax);
    XiSample xi = sample_xi(t, o.seed, o.dmax);
    auto lv = xn_values(xi, o.dmax);
    std::vector<cplx> X(lv.X.begin() + 1, lv.X.end()), bb(lv.b.begin() + 1, lv.b.end());
    return json{{"X", cj(X)}, {"b", cj(bb)}, {"c", cj(lxi_coeffs(xi, o.dmax))}};
}

json cmd_expect(const Opts& o) {
    Budget b = Budget::from_env();
    json res;
    const bool xmode = !o.p.empty() || !o.pbar.empty();
    if (xmode) {
        XMomentSpec s{parse_ints(o.p), parse_ints(o.pbar)};
        std::size_t len = std::max(s.p.size(), s.pbar.size());
        s.p.resize(len, 0);
        s.pbar.resize(len, 0);
        res["kind"] = "X";
        res["value"] = rj(x_mixed_moment(o.q, s, b));
        if (o.mc_samples > 0) {
            auto mc = xi_moment_battery(o.q, {}, {s}, o.mc_samples, o.seed).front();
            res["mc"] = json{{"mean", cj(mc.mean)}, {"stderr", mc.stderr_}, {"z", mc.z()}};
        }
    } else {
        MonomialSpec s{parse_ints(o.hol), parse_ints(o.anti)};
        res["kind"] = "c";
        Integer n;
        if (o.backend == "gf") n = monomial_expectation(o.q, s, b);
        else if (o.backend == "hashjoin") n = monomial_expectation_hashjoin(o.q, s, b);
        else throw DomainError("--backend must be gf or hashjoin");
        res["count"] = n.get_str();
        if (o.mc_samples > 0) {
            auto mc = xi_moment_battery(o.q, {s}, {}, o.mc_samples, o.seed).front();
            res["mc"] = json{{"mean", cj(mc.mean)}, {"stderr", mc.stderr_}, {"z", mc.z()}};
        }
    }
    return res;
}

json cmd_density(const Opts& o) {
    json res;
    if (o.probe) {
        std::vector<double> grid;
        for (int i = 1; i <= 200; ++i) grid.push_back(0.05 * i);
        res["probe_ov_ratio"] = probe_ov_ratio(grid);
        return res;
    }
    auto x = parse_points(o.x, "--x");
    const int k = static_cast<int>(x.size());
    if (k < 1) throw DomainError("--x needs at least one point");
    res["gaussian"] = gaussian_density(x, o.q);
    if (parse_mode(o.mode) == WeightMode::fourier) {
        DensityConfig cfg;
        cfg.budget = Budget::from_env();
        DensityEngine eng(PrimeTable::counts(o.q, k), k, cfg);
        res["F"] = eng.density(x);
        res["weight"] = eng.weight(x);
    } else {
        auto T = hermite_coeffs(k, o.q, o.D, Budget::from_env());
        int cut = std::min(o.cutoff, o.D);
        res["weight"] = hermite_weight_eval(T, x, cut);
        res["sampling_weight"] = hermite_sampling_weight(T, x, cut);
    }
    return res;
}

json cmd_hermite(const Opts& o) {
    if (o.k < 1) throw DomainError("--k must be >= 1");
    auto T = hermite_coeffs(o.k, o.q, o.D, Budget::from_env());
    bool low_zero = true;
    for (const auto& [a, g] : T.g()) {
        int w = HermiteTable::weighted_degree(a);
        if (w >= 1 && w <= 2 && g != 0) low_zero = false;
    }
    auto h0 = T.h(HermiteIndex(2 * o.k, 0));
    json res{{"terms", T.g().size()}, {"h0", {{"re", rj(h0.first)}, {"im", rj(h0.second)}}}, {"low_degree_zero", low_zero}};
    if (o.list) {
        json l = json::array();
        for (const auto& [a, g] : T.g()) {
            auto h = T.h(a);
            l.push_back(json{{"a", a}, {"wdeg", HermiteTable::weighted_degree(a)}, {"g", rj(g)},
                             {"h", {{"re", rj(h.first)}, {"im", rj(h.second)}}}});
        }
        res["entries"] = l;
    }
    return res;
}

json cmd_chimera(const Opts& o) {
    ChimeraConfig cfg;
    cfg.q = o.q;
    cfg.N = o.N;
    cfg.beta = o.beta;
    cfg.k = o.k;
    cfg.samples = o.samples;
    cfg.seed = o.seed;
    cfg.mode = parse_mode(o.mode);
    cfg.cutoff = o.cutoff;
    cfg.threads = o.threads;
    cfg.density.budget = Budget::from_env();
    auto alpha = parse_alpha(o.alpha, o.r + o.rt);
    std::vector<std::string> names = o.phis.empty() ? std::vector<std::string>{"one", "abs2:1"} : o.phis;
    std::vector<Functional> phis;
    for (const auto& s : names) phis.push_back(parse_phi(s, o.q, o.r, o.rt, alpha));
    auto r = chimera_expectation(phis, cfg);
    json est = json::array();
    for (std::size_t i = 0; i < names.size(); ++i)
        est.push_back(json{{"phi", names[i]}, {"estimate", cj(r.estimates[i])}, {"stderr", r.stderrs[i]}});
    return json{{"k", r.k}, {"samples", r.samples}, {"gamma_hat", r.gamma_hat}, {"gamma_stderr", r.gamma_stderr},
                {"ess", r.ess}, {"estimates", est}};
}

json psi_json(const CoeffPolynomial& p) {
    json t = json::array();
    for (const auto& [m, c] : p.terms()) t.push_back(json{{"hol", m.hol}, {"anti", m.anti}, {"coeff", qj(c)}});
    return t;
}

json cmd_decompose(const Opts& o) {
    auto alpha = parse_alpha(o.alpha, o.r + o.rt);
    int k = o.k < 0 ? 0 : o.k;
    auto d = moment_decomposition(o.q, o.N, o.r, o.rt, alpha, k, Budget::from_env());
    json lf = json::array();
    for (const auto& t : d.lf)
        lf.push_back(json{{"e", t.e.e}, {"weight_norm", t.weight_norm}, {"kappa", cj(t.kappa)}, {"psi", psi_json(t.psi)}});
    return json{{"lf", lf}, {"hf", {{"count", d.hf_count}, {"min_norm", d.hf_min_norm}, {"max_norm", d.hf_max_norm}}}};
}

json cmd_moment(const Opts& o) {
    MomentSpec s;
    s.q = o.q;
    s.N = o.N;
    s.r = o.r;
    s.rt = o.rt;
    s.alpha = parse_alpha(o.alpha, o.r + o.rt);
    s.K = o.K;
    s.tol = o.tol;
    s.beta = o.beta;
    CompareOptions c;
    c.chimera = o.compare;
    c.family = o.family;
    c.samples = o.samples;
    c.seed = o.seed;
    c.mode = parse_mode(o.mode);
    c.cutoff = o.cutoff;
    c.threads = o.threads;
    Budget b = Budget::from_env();
    MomentReport rep = (o.compare || o.family) ? compare_moment(s, c, b) : mt_rep_sum(s, b);
    json shells = json::array();
    for (const auto& sh : rep.shells)
        shells.push_back(json{{"norm", sh.norm}, {"terms", sh.terms}, {"nonzero", sh.nonzero}, {"l1", sh.l1}});
    json res{{"mt", cj(rep.mt)}, {"K", rep.K}, {"truncation_estimate", rep.truncation_estimate}, {"shells", shells}};
    if (rep.chimera) {
        res["chimera"] = json{{"estimate", cj(rep.chimera->estimates[0])}, {"stderr", rep.chimera->stderrs[0]},
                              {"gamma_hat", rep.chimera->gamma_hat}, {"k", rep.chimera->k}};
        res["diff_chimera_mt"] = *rep.diff_chimera_mt;
    }
    if (rep.family) {
        res["family"] = cj(*rep.family);
        res["diff_family_mt"] = *rep.diff_family_mt;
    }
    res["warnings"] = rep.warnings;
    return res;
}

json cmd_family(const Opts& o) {
    auto alpha = parse_alpha(o.alpha, o.r + o.rt);
    Budget b = Budget::from_env();
    UnitGroup G(o.q, o.N, b);
    auto Ls = family_l_polynomials(G, b);
    json res{{"q", o.q}, {"N", o.N}, {"r", o.r}, {"rt", o.rt}, {"alpha", cj(alpha)},
             {"moment", cj(family_moment(Ls, o.r, o.rt, alpha))}, {"family_size", Ls.size()}};
    if (o.list) {
        json l = json::array();
        for (const auto& L : Ls) l.push_back(cj(L.c));
        res["l_polynomials"] = l;
    }
    return res;
}

}  // namespace

int report_error(std::exception_ptr e, std::ostream& err) {
    try {
        std::rethrow_exception(e);
    } catch (const BudgetExceeded& e) {
        err << "budget exceeded: " << e.what() << "\n";
        return kBudget;
    } catch (const IdentityFailure& e) {
        err << "identity failed [" << e.invariant() << "]: " << e.what() << "\n";
        return kIdentity;
    } catch (const std::invalid_argument& e) {
        err << "usage: " << e.what() << "\n";
        return kUsage;
    } catch (const std::out_of_range& e) {
        err << "usage: " << e.what() << "\n";
        return kUsage;
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"ffm: moments of function-field L-functions and their random models", "ffm"};
    app.require_subcommand(1);
    Opts o;

    auto* primes = app.add_subcommand("primes", "prime counts E_d, A_n, B_n (optionally the primes)");
    primes->add_option("--q", o.q, "field size (prime)")->required();
    primes->add_option("--dmax", o.dmax, "largest degree")->required();
    primes->add_flag("--list", o.list, "list the primes");

    auto* xi = app.add_subcommand("xi-sample", "one random multiplicative function: X_n, b_n, c_d");
    xi->add_option("--q", o.q)->required();
    xi->add_option("--dmax", o.dmax)->required();
    xi->add_option("--seed", o.seed)->required();

    auto* expect = app.add_subcommand("expect", "exact Euler-product expectation of a monomial");
    expect->add_option("--q", o.q)->required();
    expect->add_option("--hol", o.hol, "degrees d of the c_d factors, comma separated");
    expect->add_option("--anti", o.anti, "degrees of the conj(c_d) factors");
    expect->add_option("--p", o.p, "exponents of X_1, X_2, ...");
    expect->add_option("--pbar", o.pbar, "exponents of conj X_1, conj X_2, ...");
    expect->add_option("--backend", o.backend, "gf or hashjoin")->capture_default_str();
    expect->add_option("--mc-samples", o.mc_samples, "also estimate by Monte Carlo")->capture_default_str();
    expect->add_option("--seed", o.seed)->capture_default_str();

    auto* density = app.add_subcommand("density", "density of (X_1..X_k) and the chimera weight");
    density->add_option("--q", o.q)->required();
    density->add_option("--x", o.x, "point as re,im,re,im,...");
    density->add_option("--mode", o.mode, "fourier or hermite")->capture_default_str();
    density->add_option("--D", o.D, "Hermite table degree")->capture_default_str();
    density->add_option("--cutoff", o.cutoff, "Hermite cutoff")->capture_default_str();
    density->add_flag("--probe-ov", o.probe, "report the laplace-ov probe instead");

    auto* hermite = app.add_subcommand("hermite", "Hermite coefficient table");
    hermite->add_option("--q", o.q)->required();
    hermite->add_option("--k", o.k)->required();
    hermite->add_option("--D", o.D)->capture_default_str();
    hermite->add_flag("--list", o.list, "print every coefficient");

    auto* chimera = app.add_subcommand("chimera", "weighted Haar expectations");
    chimera->add_option("--q", o.q)->required();
    chimera->add_option("--N", o.N)->required();
    chimera->add_option("--beta", o.beta)->capture_default_str();
    chimera->add_option("--k", o.k, "overrides beta when >= 1")->capture_default_str();
    chimera->add_option("--samples", o.samples)->capture_default_str();
    chimera->add_option("--seed", o.seed)->capture_default_str();
    chimera->add_option("--mode", o.mode)->capture_default_str();
    chimera->add_option("--cutoff", o.cutoff)->capture_default_str();
    chimera->add_option("--threads", o.threads)->capture_default_str();
    chimera->add_option("--phi", o.phis, "one, c:d, cbar:d, abs2:d, moment (repeatable)");
    chimera->add_option("--r", o.r)->capture_default_str();
    chimera->add_option("--rt", o.rt)->capture_default_str();
    chimera->add_option("--alpha", o.alpha, "shifts as re,im pairs");

    auto* decompose = app.add_subcommand("decompose", "low-frequency terms of the representation sum");
    decompose->add_option("--q", o.q)->required();
    decompose->add_option("--N", o.N)->required();
    decompose->add_option("--r", o.r)->capture_default_str();
    decompose->add_option("--rt", o.rt)->capture_default_str();
    decompose->add_option("--alpha", o.alpha);
    decompose->add_option("--k", o.k, "weight-norm cutoff")->required();

    auto* moment = app.add_subcommand("moment", "main term by the representation sum");
    moment->add_option("--q", o.q)->required();
    moment->add_option("--N", o.N)->required();
    moment->add_option("--r", o.r)->capture_default_str();
    moment->add_option("--rt", o.rt)->capture_default_str();
    moment->add_option("--alpha", o.alpha, "shifts as re,im pairs");
    moment->add_option("--K", o.K, "weight-norm cutoff (default from --tol)")->capture_default_str();
    moment->add_option("--tol", o.tol)->capture_default_str();
    moment->add_flag("--with-chimera,--compare", o.compare, "add the chimera estimate");
    moment->add_flag("--with-family,--family", o.family, "add the Dirichlet family average");
    moment->add_option("--beta", o.beta)->capture_default_str();
    moment->add_option("--samples", o.samples)->capture_default_str();
    moment->add_option("--seed", o.seed)->capture_default_str();
    moment->add_option("--mode", o.mode)->capture_default_str();
    moment->add_option("--cutoff", o.cutoff)->capture_default_str();
    moment->add_option("--threads", o.threads)->capture_default_str();

    auto* family = app.add_subcommand("family", "Dirichlet family moment");
    family->add_option("--q", o.q)->required();
    family->add_option("--N", o.N)->required();
    family->add_option("--r", o.r)->capture_default_str();
    family->add_option("--rt", o.rt)->capture_default_str();
    family->add_option("--alpha", o.alpha);
    family->add_flag("--list", o.list, "print every L-polynomial");

    auto* verify = app.add_subcommand("verify", "acceptance suites: core, mc, soft, all");
    verify->add_option("group", o.group)->capture_default_str();
    verify->add_option("--seed", o.seed)->capture_default_str();

    for (auto* sub : app.get_subcommands({})) sub->add_option("--out", o.out_path, "write JSON here instead of stdout");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    json report;
    report["tool_version"] = FFM_VERSION;
    report["config_echo"] = echo(sub);
    int code = kOk;
    try {
        const std::string name = sub->get_name();
        if (name == "primes") report["results"] = cmd_primes(o);
        else if (name == "xi-sample") report["results"] = cmd_xi(o);
        else if (name == "expect") report["results"] = cmd_expect(o);
        else if (name == "density") report["results"] = cmd_density(o);
        else if (name == "hermite") report["results"] = cmd_hermite(o);
        else if (name == "chimera") report["results"] = cmd_chimera(o);
        else if (name == "decompose") report["results"] = cmd_decompose(o);
        else if (name == "moment") report["results"] = cmd_moment(o);
        else if (name == "family") report["results"] = cmd_family(o);
        else if (name == "verify") {
            json list = json::array();
            for (const auto& r : run_criteria(criteria_group(o.group), o.seed)) {
                list.push_back(json{{"id", r.id}, {"title", r.title}, {"soft", r.soft}, {"pass", r.pass},
                                    {"detail", r.detail}});
                if (!r.pass && !r.soft) {
                    err << "criterion " << r.id << " failed (" << r.title << "): " << r.detail << "\n";
                    code = kIdentity;
                }
            }
            report["results"] = list;
        }
    } catch (...) {
        return report_error(std::current_exception(), err);
    }

    const std::string text = report.dump(2) + "\n";
    if (o.out_path.empty()) {
        out << text;
    } else {
        std::ofstream f(o.out_path, std::ios::binary);
        if (!f) {
            err << "cannot write " << o.out_path << "\n";
            return kUsage;
        }
        f << text;
    }
    return code;
}

}  // namespace ffm::cli
