#pragma once
// Serialisation: assembled-flow JSON, the factored text view, roots CSV,
// curve CSV/SVG, and the packaged big-polynomial fixture loader.

#include <complex>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "flow_assembler.hpp"
#include "poly.hpp"
#include "root_finder.hpp"
#include "spectra.hpp"
#include "types.hpp"

namespace flowpoly {
namespace io {

// ---------------------------------------------------------------------------
// assembled-flow JSON: {"n","k","coefficients":[... decimal strings, ascending]}

inline nlohmann::json flow_to_json(const AssembledFlow& af) {
    nlohmann::json j;
    j["n"] = af.graph.n;
    j["k"] = af.graph.k;
    j["method"] = method_name(af.method);
    j["degree"] = af.poly.degree();
    std::vector<std::string> coeffs;
    for (const auto& c : af.poly.c) coeffs.push_back(c.str());
    j["coefficients"] = coeffs;
    if (!af.provenance.empty()) {
        nlohmann::json prov;
        for (const auto& [key, val] : af.provenance) prov[key] = val;
        j["provenance"] = prov;
    }
    return j;
}

struct FlowFile {
    unsigned n = 0, k = 0;
    PolyZ poly;
};

inline FlowFile flow_from_json(const nlohmann::json& j) {
    FlowFile f;
    f.n = j.at("n").get<unsigned>();
    f.k = j.at("k").get<unsigned>();
    for (const auto& s : j.at("coefficients")) f.poly.c.emplace_back(s.get<std::string>());
    f.poly.trim();
    return f;
}

inline FlowFile read_flow_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    is >> j;
    return flow_from_json(j);
}

// ---------------------------------------------------------------------------
// factored text view: split off (Q-1)(Q-2) and (Q-3) when they divide exactly

inline std::string factored_text(const PolyZ& poly) {
    PolyR rest = to_rational_poly(poly);
    std::ostringstream head;
    head << "flow(Q) = ";
    for (long r = 1; r <= 3; ++r) {
        unsigned m = 0;
        PolyR factor = Q_var() - PolyR::constant(Rat(r));
        while (rest.degree() >= 1 && rest.eval(Rat(r)) == 0) {
            rest = divexact(rest, factor);
            ++m;
        }
        for (unsigned i = 0; i < m; ++i) head << "(Q-" << r << ")";
    }
    head << "P(Q) with\nP(Q) = " << to_integer_poly(rest).str();
    return head.str();
}

// ---------------------------------------------------------------------------
// CSV writers

inline void roots_csv(std::ostream& os, const std::vector<RootResult>& roots) {
    os << "re,im,radius,multiplicity\n";
    os << std::setprecision(17);
    for (const auto& r : roots)
        os << r.value.real() << "," << r.value.imag() << "," << r.radius << "," << r.multiplicity
           << "\n";
}

inline void curve_csv(std::ostream& os, const CurveResult& curve) {
    os << "re,im,segment,sector_a,sector_b\n";
    os << std::setprecision(17);
    for (const auto& seg : curve.segments)
        for (const auto& p : seg.points)
            os << p.real() << "," << p.imag() << "," << seg.id << "," << seg.a.str() << ","
               << seg.b.str() << "\n";
}

// ---------------------------------------------------------------------------
// SVG rendering of curve segments with optional zero overlay

inline void curve_svg(std::ostream& os, const CurveResult& curve, std::complex<double> lo,
                      std::complex<double> hi,
                      const std::vector<std::complex<double>>& zeros = {}) {
    const double W = 800, H = 800;
    auto sx = [&](double re) { return (re - lo.real()) / (hi.real() - lo.real()) * W; };
    auto sy = [&](double im) { return H - (im - lo.imag()) / (hi.imag() - lo.imag()) * H; };
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    // axes (when inside the window)
    if (lo.imag() < 0 && hi.imag() > 0)
        os << "<line x1=\"0\" y1=\"" << sy(0) << "\" x2=\"" << W << "\" y2=\"" << sy(0)
           << "\" stroke=\"#cccccc\"/>\n";
    if (lo.real() < 0 && hi.real() > 0)
        os << "<line x1=\"" << sx(0) << "\" y1=\"0\" x2=\"" << sx(0) << "\" y2=\"" << H
           << "\" stroke=\"#cccccc\"/>\n";
    for (const auto& seg : curve.segments) {
        if (seg.points.empty()) continue;
        if (seg.points.size() == 1) {
            os << "<circle cx=\"" << sx(seg.points[0].real()) << "\" cy=\"" << sy(seg.points[0].imag())
               << "\" r=\"2\" fill=\"#1f77b4\"/>\n";
            continue;
        }
        os << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
        for (const auto& p : seg.points) os << sx(p.real()) << "," << sy(p.imag()) << " ";
        os << "\"><title>" << seg.a.str() << " vs " << seg.b.str() << "</title></polyline>\n";
    }
    for (const auto& z : zeros)
        os << "<circle cx=\"" << sx(z.real()) << "\" cy=\"" << sy(z.imag())
           << "\" r=\"2.5\" fill=\"#d62728\" fill-opacity=\"0.7\"/>\n";
    os << "</svg>\n";
}

// ---------------------------------------------------------------------------
// packaged fixture: cofactor table "<i> <a_i>" with P = sum (-1)^(i+1) a_i Q^i
// and flow = (Q-1)(Q-2)(Q-3) P

struct Fixture {
    PolyZ cofactor;  // P
    PolyZ flow;      // (Q-1)(Q-2)(Q-3) P
};

inline Fixture load_cofactor_fixture(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open fixture " + path);
    Fixture fx;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        size_t idx;
        std::string mag;
        if (!(ls >> idx >> mag)) throw std::runtime_error("bad fixture line: " + line);
        if (fx.cofactor.c.size() <= idx) fx.cofactor.c.resize(idx + 1, Int(0));
        Int a(mag);
        fx.cofactor.c[idx] = (idx % 2 == 0) ? -a : a;  // sign (-1)^(i+1)
    }
    fx.cofactor.trim();
    PolyR flow = to_rational_poly(fx.cofactor);
    for (long r = 1; r <= 3; ++r) flow = flow * (Q_var() - PolyR::constant(Rat(r)));
    fx.flow = to_integer_poly(flow);
    return fx;
}

}  // namespace io
}  // namespace flowpoly
