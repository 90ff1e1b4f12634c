// Command-line surface for the flow-polynomial engine.
//
// Subcommands: flowpoly, roots, qc, curve, spectrum, amplitudes, verify.
// The cache directory honours FLOWPOLY_CACHE; --cache overrides it.

#include <complex>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "flowpoly/combinatorics.hpp"
#include "flowpoly/flow_assembler.hpp"
#include "flowpoly/gp_graph.hpp"
#include "flowpoly/io.hpp"
#include "flowpoly/poly.hpp"
#include "flowpoly/root_finder.hpp"
#include "flowpoly/spectra.hpp"
#include "flowpoly/transfer.hpp"
#include "flowpoly/young.hpp"

using namespace flowpoly;
using namespace flowpoly::io;

namespace {

struct GlobalOpts {
    unsigned jobs = 1;
    unsigned points = 0;       // extra interpolation points beyond the minimum
    uint32_t primes = 65521;   // modular prime ceiling
    std::string cache_dir;     // empty: FLOWPOLY_CACHE / default
    bool no_cache = false;
};

EngineOptions make_engine(const GlobalOpts& g) {
    EngineOptions e;
    e.jobs = g.jobs < 1 ? 1 : g.jobs;
    e.extra_points = g.points;
    e.prime_limit = g.primes;
    if (!g.cache_dir.empty()) e.cache.dir = g.cache_dir;
    e.use_cache = !g.no_cache;
    return e;
}

// "re" or "re,im"
std::complex<double> parse_complex(const std::string& s) {
    std::istringstream in(s);
    double re = 0, im = 0;
    char comma = 0;
    if (!(in >> re)) throw CLI::ValidationError("--q", "cannot parse '" + s + "'");
    if (in >> comma) {
        if (comma != ',' || !(in >> im))
            throw CLI::ValidationError("--q", "cannot parse '" + s + "'");
    }
    return {re, im};
}

// "re_lo,im_lo,re_hi,im_hi"
std::pair<std::complex<double>, std::complex<double>> parse_window(const std::string& s) {
    std::istringstream in(s);
    double v[4];
    char c;
    for (int i = 0; i < 4; ++i) {
        if (i && (!(in >> c) || c != ','))
            throw CLI::ValidationError("--window", "expected a,b,c,d");
        if (!(in >> v[i])) throw CLI::ValidationError("--window", "expected a,b,c,d");
    }
    return {{v[0], v[1]}, {v[2], v[3]}};
}

// exact rational from a decimal literal such as "5.00001" or "-3/2"
Rat parse_rat(const std::string& s) {
    auto slash = s.find('/');
    if (slash != std::string::npos)
        return Rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rat(Int(s));
    std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
    bool neg = !ip.empty() && ip[0] == '-';
    if (ip == "-" || ip.empty()) ip = "0";
    Int scale = 1;
    for (size_t i = 0; i < fp.size(); ++i) scale *= 10;
    Rat r = Rat(Int(ip));
    Rat frac(Int(fp.empty() ? "0" : fp), scale);
    return neg ? Rat(r - frac) : Rat(r + frac);
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw CLI::ValidationError("--out", "cannot open " + path);
    return file;
}

void write_roots_csv(std::ostream& os, const std::vector<RootResult>& roots, int digits) {
    os << "re,im,radius,multiplicity\n";
    os << std::setprecision(digits);
    for (const auto& r : roots)
        os << r.value.real() << "," << r.value.imag() << "," << r.radius << ","
           << r.multiplicity << "\n";
}

const std::map<unsigned, double> kCrossingTable = {
    {1, 3.0},          {2, 3.6180339887}, {3, 3.7818423129}, {4, 4.5697435537},
    {5, 4.9029018077}, {6, 5.1079785012}, {7, 5.2352605291}, {8, 5.3246966903},
    {9, 5.3886186958}, {10, 5.4364766073}, {11, 5.4729804532}};

// ---------------------------------------------------------------------------
// flowpoly

int cmd_flowpoly(unsigned n, unsigned k, const std::string& method, const std::string& out_path,
                 bool factored, const GlobalOpts& g) {
    AssembleOptions opts;
    opts.engine = make_engine(g);
    AssembledFlow af;
    if (method == "brute") {
        af = from_bruteforce(n, k);
    } else {
        if (k == 0 || n % k != 0) {
            std::cerr << "error: transfer methods need k | n (got n=" << n << ", k=" << k
                      << "); use --method brute for other members" << std::endl;
            return 2;
        }
        unsigned layers = n / k;
        af = method == "raw" ? assemble_raw(k, layers, opts) : assemble_complete(k, layers, opts);
    }

    ValidationReport rep = validate(af);
    std::ofstream file;
    std::ostream& os = open_out(file, out_path);
    if (factored)
        os << factored_text(af.poly) << "\n";
    else
        os << flow_to_json(af).dump(2) << "\n";
    for (const auto& note : rep.notes) std::cerr << "note: " << note << "\n";
    if (!rep.ok) {
        std::cerr << "validation FAILED for G(" << n << "," << k << "):\n";
        for (const auto& f : rep.failures) std::cerr << "  - " << f << "\n";
        return 1;
    }
    std::cerr << "validation passed for G(" << n << "," << k << ")" << std::endl;
    return 0;
}

// ---------------------------------------------------------------------------
// roots

int cmd_roots(const std::string& in_path, const std::string& fixture_path, int digits,
              const std::string& out_path, const std::string& certify) {
    PolyZ poly;
    if (!fixture_path.empty()) {
        poly = load_cofactor_fixture(fixture_path).flow;
    } else if (!in_path.empty()) {
        poly = read_flow_json(in_path).poly;
    } else {
        std::cerr << "error: need --in <flow.json> or --fixture <cofactor.txt>" << std::endl;
        return 2;
    }
    auto roots = all_roots(poly);
    std::ofstream file;
    std::ostream& os = open_out(file, out_path);
    write_roots_csv(os, roots, digits);
    if (!certify.empty()) {
        auto comma = certify.find(',');
        if (comma == std::string::npos) {
            std::cerr << "error: --certify expects lo,hi" << std::endl;
            return 2;
        }
        Rat lo = parse_rat(certify.substr(0, comma));
        Rat hi = parse_rat(certify.substr(comma + 1));
        RealRootCertificate cert = certify_real_root(poly, lo, hi);
        std::cerr << "certificate on (" << lo << ", " << hi << "): sign " << cert.sign_lo
                  << " -> " << cert.sign_hi << ", value " << to_double(cert.value_lo) << " -> "
                  << to_double(cert.value_hi)
                  << (cert.sign_change ? ", sign change (odd root count)" : ", no sign change");
        if (cert.distinct_roots) std::cerr << ", exactly " << *cert.distinct_roots << " distinct root(s)";
        std::cerr << std::endl;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// qc

int cmd_qc(unsigned k, double lo, double hi, const GlobalOpts& g) {
    if (lo == 0 && hi == 0) {
        auto it = kCrossingTable.find(k);
        if (it == kCrossingTable.end()) {
            std::cerr << "error: no default bracket for k=" << k << "; pass --lo/--hi" << std::endl;
            return 2;
        }
        lo = it->second - 0.15;
        hi = it->second + 0.15;
    }
    SpectraOptions opts;
    opts.engine = make_engine(g);
    QcResult r = find_qc(k, lo, hi, opts);
    std::cout << std::setprecision(12) << "Q_c(" << k << ") = " << r.qc << "\n"
              << "  sectors " << r.below.str() << " / " << r.above.str() << ", |mu| = "
              << std::abs(r.mu_below) << " / " << std::abs(r.mu_above) << "\n"
              << "  parity: " << parity_name(r.parity) << std::endl;
    return 0;
}

// ---------------------------------------------------------------------------
// curve

CurveResult invert_curve(const CurveResult& curve) {
    CurveResult inv;
    inv.unresolved = curve.unresolved;
    for (const auto& seg : curve.segments) {
        CurveSegment s;
        s.id = seg.id;
        s.a = seg.a;
        s.b = seg.b;
        for (const auto& z : seg.points)
            if (std::abs(z) > 1e-12) s.points.push_back(1.0 / z);
        if (!s.points.empty()) inv.segments.push_back(std::move(s));
    }
    return inv;
}

int cmd_curve(unsigned k, const std::string& window, unsigned res, const std::string& csv_path,
              const std::string& svg_path, const std::string& zeros_path, const GlobalOpts& g) {
    auto [lo, hi] = parse_window(window);
    SpectraOptions opts;
    opts.engine = make_engine(g);
    CurveResult curve = trace_curve(k, lo, hi, res, opts);

    std::vector<std::complex<double>> zeros;
    if (!zeros_path.empty()) {
        PolyZ poly = read_flow_json(zeros_path).poly;
        for (const auto& r : all_roots(poly)) zeros.push_back(r.value);
    }

    if (!csv_path.empty()) {
        std::ofstream f(csv_path);
        if (!f) throw CLI::ValidationError("--csv", "cannot open " + csv_path);
        curve_csv(f, curve);
    }
    if (!svg_path.empty()) {
        std::ofstream f(svg_path);
        if (!f) throw CLI::ValidationError("--svg", "cannot open " + svg_path);
        curve_svg(f, curve, lo, hi, zeros);
        // dual presentation: the same locus in the 1/Q plane
        CurveResult inv = invert_curve(curve);
        std::vector<std::complex<double>> inv_zeros;
        for (const auto& z : zeros)
            if (std::abs(z) > 1e-12) inv_zeros.push_back(1.0 / z);
        double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
        for (const auto& seg : inv.segments)
            for (const auto& z : seg.points) {
                xlo = std::min(xlo, z.real());
                xhi = std::max(xhi, z.real());
                ylo = std::min(ylo, z.imag());
                yhi = std::max(yhi, z.imag());
            }
        for (const auto& z : inv_zeros) {
            xlo = std::min(xlo, z.real());
            xhi = std::max(xhi, z.real());
            ylo = std::min(ylo, z.imag());
            yhi = std::max(yhi, z.imag());
        }
        if (xlo <= xhi && ylo <= yhi) {
            double mx = 0.05 * std::max(xhi - xlo, 1e-6), my = 0.05 * std::max(yhi - ylo, 1e-6);
            std::string inv_path = svg_path;
            auto dot = inv_path.rfind(".svg");
            inv_path = (dot == std::string::npos ? inv_path : inv_path.substr(0, dot)) +
                       "-invq.svg";
            std::ofstream fi(inv_path);
            curve_svg(fi, inv, {xlo - mx, ylo - my}, {xhi + mx, yhi + my}, inv_zeros);
            std::cerr << "wrote " << inv_path << " (1/Q plane)" << std::endl;
        }
    }
    if (csv_path.empty() && svg_path.empty()) curve_csv(std::cout, curve);
    for (const auto& u : curve.unresolved) std::cerr << "unresolved: " << u << "\n";
    std::cerr << curve.segments.size() << " segment(s)" << std::endl;
    return 0;
}

// ---------------------------------------------------------------------------
// spectrum

int cmd_spectrum(unsigned k, const std::string& q_str, std::optional<bool> restrict_override,
                 const GlobalOpts& g) {
    std::complex<double> q = parse_complex(q_str);
    SpectraOptions opts;
    opts.engine = make_engine(g);
    opts.restrict_sectors = restrict_override;
    SpectraEngine eng(k, opts);
    SpectrumSample s = eng.sample(q);
    std::cout << "sector spectra at q = " << q.real() << (q.imag() < 0 ? " - " : " + ")
              << std::abs(q.imag()) << "i (k = " << k << ")\n";
    std::cout << std::left << std::setw(12) << "sector" << std::right << std::setw(24) << "mu1"
              << std::setw(24) << "mu2" << std::setw(14) << "|mu1|" << std::setw(22)
              << "amplitude" << std::setw(12) << "residual" << std::setw(6) << "dim" << "\n";
    auto cplx = [](std::complex<double> z) {
        std::ostringstream o;
        o << std::setprecision(8) << z.real() << (z.imag() < 0 ? "-" : "+")
          << std::abs(z.imag()) << "i";
        return o.str();
    };
    for (const auto& se : s.sectors) {
        std::cout << std::left << std::setw(12) << se.key.str() << std::right << std::setw(24)
                  << cplx(se.mu1) << std::setw(24) << cplx(se.mu2) << std::setw(14)
                  << std::setprecision(8) << std::abs(se.mu1) << std::setw(22)
                  << cplx(se.amplitude) << std::setw(12) << std::setprecision(2)
                  << se.residual << std::setw(6) << se.dim
                  << (se.converged ? "" : "  (unconverged)") << "\n";
    }
    if (s.flagged) std::cerr << "warning: at least one sector did not converge" << std::endl;
    return s.flagged ? 1 : 0;
}

// ---------------------------------------------------------------------------
// amplitudes

int cmd_amplitudes(unsigned k) {
    std::cout << "eigenvalue amplitudes for k = " << k << "\n";
    for (unsigned l = 0; l + 1 <= k; ++l)
        for (const auto& lam : young_diagrams(l))
            std::cout << "  alpha(" << l << "," << lam.str() << ") = " << alpha(l, lam).str()
                      << "\n";
    std::cout << "  beta(" << k << ")  = " << beta(k).str() << "   [l = k row sector]\n";
    std::cout << "  gamma(" << k + 1 << ") = " << flowpoly::gamma(k).str()
              << "   [trivial eigenvalue (-1)^k]\n";
    return 0;
}

// ---------------------------------------------------------------------------
// verify

struct Scoreboard {
    int passed = 0, failed = 0;

    template <typename F>
    void item(const std::string& name, F&& body) {
        try {
            body();
            std::cout << "  [ok]   " << name << std::endl;
            ++passed;
        } catch (const std::exception& e) {
            std::cout << "  [FAIL] " << name << ": " << e.what() << std::endl;
            ++failed;
        }
    }
};

void expect(bool cond, const std::string& msg) {
    if (!cond) throw std::runtime_error(msg);
}

void suite_small_oracle(Scoreboard& sb, const GlobalOpts& g) {
    std::cout << "suite small-oracle: transfer assembly vs edge-subset oracle" << std::endl;
    const std::vector<std::pair<unsigned, unsigned>> cases = {
        {1, 3}, {1, 4}, {1, 5}, {1, 6}, {1, 7}, {1, 8}, {2, 2}, {2, 3}, {2, 4}, {3, 2}};
    AssembleOptions opts;
    opts.engine = make_engine(g);
    for (auto [k, layers] : cases) {
        unsigned n = k * layers;
        sb.item("G(" + std::to_string(n) + "," + std::to_string(k) + ")", [&] {
            AssembledFlow af = assemble_complete(k, layers, opts);
            expect(af.poly == flow_poly_bruteforce(build(n, k)).poly, "oracle mismatch");
            expect(validate(af).ok, "validation failed");
        });
    }
}

void suite_closed_form(Scoreboard& sb, const GlobalOpts& g) {
    std::cout << "suite closed-form: three-eigenvalue formula and the 10-vertex member"
              << std::endl;
    AssembleOptions opts;
    opts.engine = make_engine(g);
    for (unsigned n = 3; n <= 12; ++n)
        sb.item("G(" + std::to_string(n) + ",1) closed form", [&] {
            expect(assemble_complete(1, n, opts).poly == flow_poly_closed_gn1(n).poly,
                   "mismatch");
        });
    sb.item("G(5,2) factorisation", [&] {
        auto lin = [](long long a) {
            PolyZ p;
            p.c = {Int(-a), Int(1)};
            return p;
        };
        PolyZ quad;
        quad.c = {Int(10), Int(-5), Int(1)};
        expect(from_bruteforce(5, 2).poly == lin(1) * lin(2) * lin(3) * lin(4) * quad,
               "mismatch");
    });
}

void suite_counting(Scoreboard& sb) {
    std::cout << "suite counting: distinct-eigenvalue totals and sum rules" << std::endl;
    sb.item("distinct-eigenvalue totals k=1..7", [&] {
        const long long want[] = {3, 7, 36, 229, 1658, 12803, 105934};
        for (unsigned k = 1; k <= 7; ++k)
            expect(d_tilde(k) == Int(want[k - 1]), "off at k=" + std::to_string(k));
    });
    sb.item("amplitude sum rules k<=8", [&] {
        for (unsigned k = 0; k <= 8; ++k) {
            PolyR plain, nosing;
            for (unsigned l = 0; l <= k; ++l) {
                plain += beta(l) * Rat(dim_marked(k, l), factorial(l));
                nosing += beta(l) * Rat(dim_marked_nosingleton(k, l), factorial(l));
            }
            expect(plain == PolyR::monomial(Rat(1), k), "Q^k rule at k=" + std::to_string(k));
            expect(nosing == Q_shift(Rat(-1)).pow(k), "(Q-1)^k rule at k=" + std::to_string(k));
        }
    });
}

void suite_tables(Scoreboard& sb) {
    std::cout << "suite tables: frozen beta/gamma amplitude tables" << std::endl;
    auto rp = [](std::vector<long long> asc) {
        PolyR p;
        for (long long v : asc) p.c.push_back(Rat(v));
        p.trim();
        return p;
    };
    sb.item("beta_0..beta_7", [&] {
        const std::vector<std::vector<long long>> t = {
            {1},
            {-1, 1},
            {1, -3, 1},
            {-1, 8, -6, 1},
            {1, -24, 29, -10, 1},
            {-1, 89, -145, 75, -15, 1},
            {1, -415, 814, -545, 160, -21, 1},
            {-1, 2372, -5243, 4179, -1575, 301, -28, 1}};
        for (unsigned l = 0; l < t.size(); ++l)
            expect(beta(l) == rp(t[l]), "beta_" + std::to_string(l));
    });
    sb.item("gamma_2..gamma_8", [&] {
        const std::vector<std::vector<long long>> t = {
            {1, -3, 1},
            {-1, 6, -5, 1},
            {1, -11, 15, -7, 1},
            {-1, 20, -38, 28, -9, 1},
            {1, -37, 90, -90, 45, -11, 1},
            {-1, 70, -207, 260, -175, 66, -13, 1},
            {1, -135, 469, -707, 595, -301, 91, -15, 1}};
        for (unsigned k = 1; k <= 7; ++k)
            expect(gamma(k) == rp(t[k - 1]), "gamma_" + std::to_string(k + 1));
    });
}

void suite_fixture(Scoreboard& sb, const std::string& fixture_path) {
    std::cout << "suite fixture: shipped 120-vertex cofactor" << std::endl;
    sb.item("exact values and certified real roots", [&] {
        Fixture fx = load_cofactor_fixture(fixture_path);
        expect(fx.flow.eval(Int(4)) == Int("1133172760943853528"), "flow(4)");
        expect(fx.flow.eval(Int(5)) == Int("4488918995790513676672232799446257724715600"),
               "flow(5)");
        RealRootCertificate lo =
            certify_real_root(fx.flow, Rat(500001, 100000), Rat(500002, 100000));
        expect(lo.sign_lo > 0 && lo.sign_hi < 0, "(+,-) pattern on (5.00001, 5.00002)");
        RealRootCertificate hi =
            certify_real_root(fx.flow, Rat(516534, 100000), Rat(516535, 100000));
        expect(hi.sign_lo < 0 && hi.sign_hi > 0, "(-,+) pattern on (5.16534, 5.16535)");
    });
}

int cmd_verify(const std::string& suite, const std::string& fixture_path, const GlobalOpts& g) {
    Scoreboard sb;
    bool all = suite == "all";
    if (all || suite == "small-oracle") suite_small_oracle(sb, g);
    if (all || suite == "closed-form") suite_closed_form(sb, g);
    if (all || suite == "counting") suite_counting(sb);
    if (all || suite == "tables") suite_tables(sb);
    if (all || suite == "fixture") suite_fixture(sb, fixture_path);
    if (sb.passed + sb.failed == 0) {
        std::cerr << "error: unknown suite '" << suite
                  << "' (small-oracle, closed-form, counting, tables, fixture, all)"
                  << std::endl;
        return 2;
    }
    std::cout << "scoreboard: " << sb.passed << " passed, " << sb.failed << " failed"
              << std::endl;
    return sb.failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact flow polynomials of generalised Petersen graphs via transfer matrices"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--jobs", g.jobs, "worker threads for trace evaluation")->capture_default_str();
    app.add_option("--points", g.points, "extra interpolation points beyond the minimum")
        ->capture_default_str();
    app.add_option("--primes", g.primes, "modular prime ceiling")->capture_default_str();
    app.add_option("--cache", g.cache_dir, "cache directory (default: FLOWPOLY_CACHE)");
    app.add_flag("--no-cache", g.no_cache, "disable the block/trace cache");

    // flowpoly
    auto* cf = app.add_subcommand("flowpoly", "assemble the flow polynomial of G(n,k)");
    unsigned n = 0, k = 0;
    std::string method = "transfer", out_path = "-";
    bool factored = false;
    cf->add_option("--n", n, "outer cycle length")->required();
    cf->add_option("--k", k, "inner step")->required();
    cf->add_option("--method", method, "transfer | raw | brute")->capture_default_str();
    cf->add_option("--out", out_path, "output file (default stdout)");
    cf->add_flag("--factored", factored, "print the (Q-1)(Q-2)(Q-3) factored view instead of JSON");

    // roots
    auto* cr = app.add_subcommand("roots", "certified roots of an assembled polynomial");
    std::string in_path, fixture_path, certify;
    int digits = 17;
    cr->add_option("--in", in_path, "flow JSON file (from the flowpoly command)");
    cr->add_option("--fixture", fixture_path, "signed cofactor fixture file");
    cr->add_option("--digits", digits, "printed digits")->capture_default_str();
    cr->add_option("--out", out_path, "output CSV (default stdout)");
    cr->add_option("--certify", certify, "exact sign certificate on lo,hi (decimals or p/q)");

    // qc
    auto* cq = app.add_subcommand("qc", "largest real equimodular crossing for step k");
    double lo = 0, hi = 0;
    cq->add_option("--k", k, "inner step")->required();
    cq->add_option("--lo", lo, "bracket lower end");
    cq->add_option("--hi", hi, "bracket upper end");

    // curve
    auto* cc = app.add_subcommand("curve", "direct-search equimodular curve in a window");
    std::string window = "1.5,-2.5,6.5,2.5", csv_path, svg_path, zeros_path;
    unsigned res = 16;
    cc->add_option("--k", k, "inner step")->required();
    cc->add_option("--window", window, "re_lo,im_lo,re_hi,im_hi")->capture_default_str();
    cc->add_option("--res", res, "grid resolution")->capture_default_str();
    cc->add_option("--csv", csv_path, "CSV output file");
    cc->add_option("--svg", svg_path, "SVG output file (also writes the 1/Q-plane view)");
    cc->add_option("--zeros", zeros_path, "flow JSON whose roots are overlaid");

    // spectrum
    auto* cs = app.add_subcommand("spectrum", "per-sector dominant eigenvalues at a point");
    std::string q_str = "5";
    bool full = false, restricted = false;
    cs->add_option("--k", k, "inner step")->required();
    cs->add_option("--q", q_str, "evaluation point re[,im]")->capture_default_str();
    cs->add_flag("--full", full, "force the full sector list (default for k <= 5)");
    cs->add_flag("--restricted", restricted, "force the restricted row-sector list");

    // amplitudes
    auto* ca = app.add_subcommand("amplitudes", "eigenvalue amplitude polynomials for step k");
    ca->add_option("--k", k, "inner step")->required();

    // verify
    auto* cv = app.add_subcommand("verify", "run a named check suite and print a scoreboard");
    std::string suite = "all";
    std::string verify_fixture = "data/gp119_7_cofactor.txt";
    cv->add_option("--suite", suite,
                   "small-oracle | closed-form | counting | tables | fixture | all")
        ->capture_default_str();
    cv->add_option("--fixture", verify_fixture, "cofactor fixture path for the fixture suite")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cf->parsed()) return cmd_flowpoly(n, k, method, out_path, factored, g);
        if (cr->parsed()) return cmd_roots(in_path, fixture_path, digits, out_path, certify);
        if (cq->parsed()) return cmd_qc(k, lo, hi, g);
        if (cc->parsed()) return cmd_curve(k, window, res, csv_path, svg_path, zeros_path, g);
        if (cs->parsed()) {
            std::optional<bool> ro;
            if (full) ro = false;
            if (restricted) ro = true;
            return cmd_spectrum(k, q_str, ro, g);
        }
        if (ca->parsed()) return cmd_amplitudes(k);
        if (cv->parsed()) return cmd_verify(suite, verify_fixture, g);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    }
    return 0;
}
