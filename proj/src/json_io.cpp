#include "compop/json_io.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace compop {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json to_json(const DirichletPolynomial& f) {
    json terms = json::array();
    for (const auto& [n, c] : f.terms())
        terms.push_back({{"n", n}, {"re", c.real()}, {"im", c.imag()}});
    return {{"terms", terms}};
}

DirichletPolynomial polynomial_from_json(const json& j) {
    DirichletPolynomial f;
    for (const auto& t : j.at("terms"))
        f.add(t.at("n").get<std::uint64_t>(),
              Complex(t.at("re").get<double>(), t.value("im", 0.0)));
    return f;
}

json to_json(const CharacterSample& cs) {
    json vals = json::array();
    for (const auto& v : cs.values) vals.push_back({v.real(), v.imag()});
    return {{"seed", cs.seed}, {"values", vals}};
}

CharacterSample character_from_json(const json& j) {
    CharacterSample cs;
    cs.seed = j.value("seed", std::uint64_t(0));
    for (const auto& v : j.at("values"))
        cs.values.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
    return cs;
}

json to_json(const Symbol& s) { return {{"c0", s.c0}, {"psi", to_json(s.psi)}}; }

Symbol symbol_from_json(const json& j) {
    return make_custom(j.at("c0").get<int>(), polynomial_from_json(j.at("psi")));
}

json to_json(const DiscMap& m) {
    json params = json::object();
    switch (m.family()) {
        case DiscMap::Family::identity:
            break;
        case DiscMap::Family::scalar:
            params["a_re"] = m.scalar_a().real();
            params["a_im"] = m.scalar_a().imag();
            break;
        case DiscMap::Family::lens:
            params["theta"] = m.lens_theta();
            break;
        case DiscMap::Family::moebius:
            // round-trip via taylor is lossy; store the evaluated coefficients
            break;
    }
    return {{"family", m.family_name()}, {"params", params}};
}

DiscMap discmap_from_json(const json& j) {
    std::string fam = j.at("family").get<std::string>();
    const json params = j.value("params", json::object());
    if (fam == "identity") return DiscMap::identity();
    if (fam == "scalar")
        return DiscMap::scalar(Complex(params.at("a_re").get<double>(),
                                       params.value("a_im", 0.0)));
    if (fam == "lens") return DiscMap::lens(params.at("theta").get<double>());
    if (fam == "moebius")
        return DiscMap::moebius(Complex(params.at("a_re").get<double>(), params.value("a_im", 0.0)),
                                Complex(params.at("b_re").get<double>(), params.value("b_im", 0.0)),
                                Complex(params.at("c_re").get<double>(), params.value("c_im", 0.0)),
                                Complex(params.at("d_re").get<double>(), params.value("d_im", 0.0)));
    throw std::invalid_argument("discmap_from_json: unknown family " + fam);
}

json to_json(const PointSequence& s) {
    json pts = json::array();
    for (const auto& p : s.points) pts.push_back({p.real(), p.imag()});
    std::string d = s.domain == KernelDomain::zeta_halfplane        ? "zeta"
                    : s.domain == KernelDomain::classical_halfplane ? "classical"
                                                                    : "disc";
    return {{"domain", d}, {"points", pts}};
}

PointSequence points_from_json(const json& j, KernelDomain fallback_domain) {
    KernelDomain dom = fallback_domain;
    const json* pts = &j;
    if (j.is_object()) {
        if (j.contains("domain")) {
            std::string d = j.at("domain").get<std::string>();
            if (d == "zeta") dom = KernelDomain::zeta_halfplane;
            else if (d == "classical") dom = KernelDomain::classical_halfplane;
            else if (d == "disc") dom = KernelDomain::disc;
            else throw std::invalid_argument("points_from_json: unknown domain " + d);
        }
        pts = &j.at("points");
    }
    std::vector<Complex> v;
    for (const auto& p : *pts) v.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    return PointSequence(std::move(v), dom);
}

json to_json(const SingularSpectrum& s, const std::string& provenance) {
    json rows = json::array();
    for (std::size_t i = 0; i < s.values.size(); ++i)
        rows.push_back({{"n", i + 1}, {"value", s.values[i]}, {"prov", provenance}});
    return {{"N", s.N}, {"M", s.M}, {"values", rows}};
}

json to_json(const EigenSpectrum& s, const std::string& provenance) {
    json rows = json::array();
    for (std::size_t i = 0; i < s.values.size(); ++i)
        rows.push_back({{"n", i + 1},
                        {"re", s.values[i].real()},
                        {"im", s.values[i].imag()},
                        {"modulus", std::abs(s.values[i])},
                        {"prov", provenance}});
    return {{"N", s.N}, {"values", rows}};
}

json to_json(const DecayFitReport& r) {
    json models = json::array();
    for (const auto& m : r.models)
        models.push_back({{"name", m.name},
                          {"slope", m.slope},
                          {"intercept", m.intercept},
                          {"r2", m.r2},
                          {"rss", m.rss},
                          {"aicc", m.aicc},
                          {"valid", m.valid}});
    return {{"selected", r.selected}, {"param", r.param},     {"amplitude", r.amplitude},
            {"r2", r.r2},             {"models", models},     {"residuals", r.residuals},
            {"window", {r.lo, r.hi}}, {"prov", "exact"}};
}

json operator_to_json(const TruncatedOperator& op) {
    json entries = json::array();
    for (int j = 0; j < op.mat.cols(); ++j)
        for (int i = 0; i < op.mat.rows(); ++i) {
            Complex v = op.mat(i, j);
            if (v != Complex(0.0)) {
                std::uint64_t row = op.basis == BasisTag::dirichlet
                                        ? op.row_freqs[std::size_t(i)]
                                        : std::uint64_t(i);
                entries.push_back({row, j + (op.basis == BasisTag::dirichlet ? 1 : 0),
                                   v.real(), v.imag()});
            }
        }
    return {{"rows", op.row_cap},
            {"cols", op.cols},
            {"basis", op.basis == BasisTag::dirichlet ? "dirichlet" : "disc-monomial"},
            {"entries", entries},
            {"col_tails", op.col_tails}};
}

std::string operator_to_csv(const TruncatedOperator& op) {
    std::ostringstream os;
    os << "row,col,re,im\n";
    for (int j = 0; j < op.mat.cols(); ++j)
        for (int i = 0; i < op.mat.rows(); ++i) {
            Complex v = op.mat(i, j);
            if (v == Complex(0.0)) continue;
            std::uint64_t row =
                op.basis == BasisTag::dirichlet ? op.row_freqs[std::size_t(i)] : std::uint64_t(i);
            int col = j + (op.basis == BasisTag::dirichlet ? 1 : 0);
            os << row << "," << col << "," << format_double(v.real()) << ","
               << format_double(v.imag()) << "\n";
        }
    return os.str();
}

} // namespace compop
