#include "adhesion/fields.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <fstream>
#include <limits>
#include <json.hpp>
#include <stdexcept>

#include "adhesion/convexkit.hpp"

namespace adhesion {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLog2Pi = std::log(2.0 * M_PI);

double max_norm(const std::vector<Vec2>& v) {
    double k = 0;
    for (auto a : v) k = std::max(k, norm(a));
    return k;
}

std::vector<Vec2> unique_vectors(const std::vector<Vec2>& v) {
    std::vector<Vec2> u;
    for (auto a : v)
        if (std::find(u.begin(), u.end(), a) == u.end()) u.push_back(a);
    return u;
}

// Region of R^d where v_i is the minimizing vector: a cone with apex 0.
struct Cone {
    enum Kind { empty, plane, half, wedge } kind = empty;
    Vec2 n1, n2;  // unit inward normals
    Vec2 e1, e2;  // unit boundary directions
};

Cone cone_2d(const std::vector<Vec2>& v, std::size_t i) {
    Cone c;
    std::vector<Vec2> a;
    for (std::size_t j = 0; j < v.size(); ++j)
        if (j != i) a.push_back(v[j] - v[i]);
    if (a.empty()) { c.kind = Cone::plane; return c; }
    bool parallel = true;
    for (auto q : a)
        if (std::abs(cross(q, a[0])) > 1e-14 * norm(q) * norm(a[0]) || dot(q, a[0]) <= 0) parallel = false;
    if (parallel) {
        c.kind = Cone::half;
        c.n1 = a[0] / norm(a[0]);
        return c;
    }
    std::vector<Vec2> cand;
    for (auto q : a) {
        Vec2 d = perp(q) / norm(q);
        for (Vec2 e : {d, -d}) {
            bool ok = true;
            for (auto r : a)
                if (dot(r, e) < -1e-13 * norm(r)) { ok = false; break; }
            if (!ok) continue;
            bool dup = false;
            for (auto f : cand)
                if (norm(f - e) < 1e-12) dup = true;
            if (!dup) cand.push_back(e);
        }
    }
    if (cand.size() < 2) return c;  // measure zero
    // extreme pair: largest opening angle
    double best = -1;
    for (std::size_t p = 0; p < cand.size(); ++p)
        for (std::size_t q = p + 1; q < cand.size(); ++q) {
            double ang = std::acos(std::clamp(dot(cand[p], cand[q]), -1.0, 1.0));
            if (ang > best) { best = ang; c.e1 = cand[p]; c.e2 = cand[q]; }
        }
    c.kind = Cone::wedge;
    c.n1 = cross(c.e1, c.e2) > 0 ? perp(c.e1) : -perp(c.e1);
    c.n2 = cross(c.e2, c.e1) > 0 ? perp(c.e2) : -perp(c.e2);
    return c;
}

double phi1(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); }

// Probability of the cone under N(m, sigma^2 I) and its gradient in m.
void cone_prob(const Cone& c, Vec2 m, double sigma, double& P, Vec2& dP) {
    dP = {};
    switch (c.kind) {
        case Cone::empty: P = 0; return;
        case Cone::plane: P = 1; return;
        case Cone::half: {
            double a = dot(c.n1, m) / sigma;
            P = norm_cdf(a);
            dP = (phi1(a) / sigma) * c.n1;
            return;
        }
        case Cone::wedge: {
            double a1 = dot(c.n1, m) / sigma, a2 = dot(c.n2, m) / sigma;
            P = bvn_cdf(a1, a2, dot(c.n1, c.n2));
            for (int k = 0; k < 2; ++k) {
                Vec2 e = k ? c.e2 : c.e1, n = k ? c.n2 : c.n1;
                double along = dot(m, e) / sigma, across = cross(e, m) / sigma;
                dP += (phi1(across) * norm_cdf(along) / sigma) * n;
            }
            return;
        }
    }
}

struct MinTerm {
    Vec2 v;
    double P;
    Vec2 dP;
};

// Gaussian N(x - t v_i, eps t) mass of each cell of the min potential.
std::vector<MinTerm> min_terms(const PotentialSpec& s, Vec2 x, double t, double eps) {
    auto v = unique_vectors(s.vectors);
    double sigma = std::sqrt(eps * t);
    std::vector<MinTerm> out;
    if (s.dim == 1) {
        double vmin = kInf, vmax = -kInf;
        for (auto a : v) { vmin = std::min(vmin, a.x); vmax = std::max(vmax, a.x); }
        for (auto a : v) {
            double m = x.x - t * a.x;
            MinTerm term{a, 0.0, {}};
            if (vmin == vmax) term.P = 1;
            else if (a.x == vmin) { term.P = norm_cdf(m / sigma); term.dP = {phi1(m / sigma) / sigma, 0}; }
            else if (a.x == vmax) { term.P = norm_cdf(-m / sigma); term.dP = {-phi1(m / sigma) / sigma, 0}; }
            out.push_back(term);
        }
        return out;
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        Cone c = cone_2d(v, i);
        MinTerm term{v[i], 0.0, {}};
        cone_prob(c, x - t * v[i], sigma, term.P, term.dP);
        out.push_back(term);
    }
    return out;
}

ViscousValue cole_hopf_min(const PotentialSpec& s, Vec2 x, double t, double eps) {
    auto terms = min_terms(s, x, t, eps);
    double M = -kInf;
    std::vector<double> L(terms.size(), -kInf);
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (terms[i].P <= 0) continue;
        double ui = dot(terms[i].v, x) - 0.5 * t * norm2(terms[i].v);
        L[i] = -ui / eps + std::log(terms[i].P);
        M = std::max(M, L[i]);
    }
    double S = 0;
    Vec2 num;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        double ui = dot(terms[i].v, x) - 0.5 * t * norm2(terms[i].v);
        double scale = std::exp(-ui / eps - M);
        if (L[i] > -kInf) {
            double wi = std::exp(L[i] - M);
            S += wi;
            num += wi * terms[i].v;
        }
        num -= (eps * scale) * terms[i].dP;
    }
    ViscousValue r;
    r.u = -eps * (M + std::log(S));
    r.grad = num / S;
    return r;
}

// Box of candidate Hopf-Lax minimizers for x at time t.
void minimizer_box(const PotentialSpec& s, Vec2 x, double t, Vec2& lo, Vec2& hi) {
    switch (s.kind) {
        case PotentialKind::zero: lo = hi = x; return;
        case PotentialKind::linear: lo = hi = x - t * s.vectors[0]; return;
        case PotentialKind::piecewise_linear_min: {
            lo = {kInf, kInf};
            hi = {-kInf, -kInf};
            for (auto v : s.vectors) {
                Vec2 p = x - t * v;
                lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
                hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
            }
            return;
        }
        case PotentialKind::quadratic_perturbation: {
            double q = 1.0 + s.lambda * t;
            minimizer_box(*s.base, x / q, t / q, lo, hi);
            return;
        }
        case PotentialKind::sampled:
            lo = x - Vec2{s.K * t, s.K * t};
            hi = x + Vec2{s.K * t, s.K * t};
            return;
    }
}

struct Rule {
    std::vector<double> x, w;
};

Rule panel_rule(double a, double b, int panels) {
    using G = boost::math::quadrature::gauss<double, 8>;
    const auto& ab = G::abscissa();
    const auto& wt = G::weights();
    Rule r;
    double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        double c = a + (p + 0.5) * h, hw = 0.5 * h;
        for (std::size_t i = 0; i < ab.size(); ++i) {
            for (int sgn : {-1, 1}) {
                if (ab[i] == 0 && sgn > 0) continue;
                r.x.push_back(c + sgn * hw * ab[i]);
                r.w.push_back(hw * wt[i]);
            }
        }
    }
    return r;
}

// log-sum-exp integral of exp(E(y)) with first moment; E is evaluated at every node.
template <class E>
void lse_integral(const PotentialSpec& s, Vec2 x, double t, const ViscousParams& vp, E&& expo, double& logI,
                  Vec2& mean) {
    vp.validate();
    double sigma = std::sqrt(vp.eps * t);
    Vec2 lo, hi;
    minimizer_box(s, x, t, lo, hi);
    double m = vp.quad_halfwidth * sigma;
    auto rule_for = [&](double a, double b) {
        int nodes = vp.quad_points > 0 ? vp.quad_points : int(std::ceil(16.0 * (b - a) / sigma));
        int panels = std::max(1, nodes / 8);
        return panel_rule(a, b, panels);
    };
    Rule r0 = rule_for(lo.x - m, hi.x + m);
    Rule r1 = s.dim == 2 ? rule_for(lo.y - m, hi.y + m) : Rule{{0.0}, {1.0}};
    std::vector<double> ex(r0.x.size() * r1.x.size());
    double M = -kInf;
    for (std::size_t i = 0; i < r0.x.size(); ++i)
        for (std::size_t j = 0; j < r1.x.size(); ++j) {
            double e = expo(Vec2{r0.x[i], r1.x[j]});
            ex[i * r1.x.size() + j] = e;
            M = std::max(M, e);
        }
    double S = 0;
    Vec2 first;
    for (std::size_t i = 0; i < r0.x.size(); ++i)
        for (std::size_t j = 0; j < r1.x.size(); ++j) {
            double w = r0.w[i] * r1.w[j] * std::exp(ex[i * r1.x.size() + j] - M);
            S += w;
            first += w * Vec2{r0.x[i], r1.x[j]};
        }
    logI = M + std::log(S);
    mean = first / S;
}

void require_t(double t) {
    if (!(t > 0)) throw std::invalid_argument("time must be positive");
}

}  // namespace

PotentialSpec PotentialSpec::zero(int dim) {
    PotentialSpec s;
    s.kind = PotentialKind::zero;
    s.dim = dim;
    return s;
}

PotentialSpec PotentialSpec::linear(Vec2 v, int dim) {
    PotentialSpec s;
    s.kind = PotentialKind::linear;
    s.dim = dim;
    if (dim == 1) v.y = 0;
    s.vectors = {v};
    s.K = norm(v);
    return s;
}

PotentialSpec PotentialSpec::min_of(std::vector<Vec2> v, int dim) {
    if (v.empty()) throw std::invalid_argument("min potential needs at least one vector");
    PotentialSpec s;
    s.kind = PotentialKind::piecewise_linear_min;
    s.dim = dim;
    if (dim == 1)
        for (auto& a : v) a.y = 0;
    s.vectors = std::move(v);
    s.K = max_norm(s.vectors);
    return s;
}

PotentialSpec PotentialSpec::quadratic(const PotentialSpec& base, double lambda, double radius) {
    if (!(lambda >= 0)) throw std::invalid_argument("lambda must be non-negative");
    PotentialSpec s;
    s.kind = PotentialKind::quadratic_perturbation;
    s.dim = base.dim;
    s.lambda = lambda;
    s.K = base.K + lambda * radius;
    s.base = std::make_shared<PotentialSpec>(base);
    return s;
}

PotentialSpec PotentialSpec::sampled(ScalarField f) {
    PotentialSpec s;
    s.kind = PotentialKind::sampled;
    s.dim = f.grid.dim;
    double K = 0;
    for (auto g : grid_gradient(f)) K = std::max(K, norm(g));
    auto r = slope_range(f);
    for (auto [a, b] : r) K = std::max({K, std::abs(a), std::abs(b)});
    s.K = K;
    double lam = 0;
    const Grid& g = f.grid;
    for (std::size_t k = 0; k < g.size(); ++k) {
        auto m = g.multi(k);
        for (int a = 0; a < g.dim; ++a) {
            if (m[a] == 0 || m[a] + 1 >= g.n[a]) continue;
            std::size_t kp = a == 0 ? g.index(m[0] + 1, m[1]) : g.index(m[0], m[1] + 1);
            std::size_t km = a == 0 ? g.index(m[0] - 1, m[1]) : g.index(m[0], m[1] - 1);
            double h = g.spacing(a);
            lam = std::max(lam, (f.values[kp] - 2 * f.values[k] + f.values[km]) / (h * h));
        }
    }
    s.lambda = lam;
    s.field = std::make_shared<ScalarField>(std::move(f));
    return s;
}

std::string PotentialSpec::to_json() const {
    nlohmann::json j;
    switch (kind) {
        case PotentialKind::zero: j["kind"] = "zero"; break;
        case PotentialKind::linear: j["kind"] = "linear"; break;
        case PotentialKind::piecewise_linear_min: j["kind"] = "piecewise_linear_min"; break;
        case PotentialKind::quadratic_perturbation: j["kind"] = "quadratic_perturbation"; break;
        case PotentialKind::sampled: j["kind"] = "sampled"; break;
    }
    j["dim"] = dim;
    if (kind == PotentialKind::linear) {
        j["vector"] = dim == 1 ? nlohmann::json{vectors[0].x} : nlohmann::json{vectors[0].x, vectors[0].y};
    } else if (kind == PotentialKind::piecewise_linear_min) {
        auto arr = nlohmann::json::array();
        for (auto v : vectors) arr.push_back(dim == 1 ? nlohmann::json{v.x} : nlohmann::json{v.x, v.y});
        j["vectors"] = arr;
    } else if (kind == PotentialKind::quadratic_perturbation) {
        j["lambda"] = lambda;
        j["base"] = nlohmann::json::parse(base->to_json());
    }
    j["K"] = K;
    return j.dump();
}

PotentialSpec PotentialSpec::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    std::string kind = j.at("kind");
    auto vec = [](const nlohmann::json& a) {
        return Vec2{a.at(0).get<double>(), a.size() > 1 ? a.at(1).get<double>() : 0.0};
    };
    int dim = j.value("dim", -1);
    if (kind == "zero") return zero(dim < 0 ? 2 : dim);
    if (kind == "linear") {
        auto& a = j.contains("vector") ? j["vector"] : j.at("vectors").at(0);
        return linear(vec(a), dim < 0 ? int(a.size()) : dim);
    }
    if (kind == "piecewise_linear_min") {
        std::vector<Vec2> v;
        for (auto& a : j.at("vectors")) v.push_back(vec(a));
        return min_of(v, dim < 0 ? int(j.at("vectors").at(0).size()) : dim);
    }
    if (kind == "quadratic_perturbation")
        return quadratic(from_json(j.at("base").dump()), j.at("lambda").get<double>(), j.value("radius", 4.0));
    if (kind == "sampled") {
        std::ifstream in(j.at("csv").get<std::string>());
        if (!in) throw std::runtime_error("sampled potential: cannot open csv");
        return sampled(read_csv(in));
    }
    throw std::invalid_argument("unknown potential kind '" + kind + "'");
}

TimeConstants TimeConstants::make(double lambda, double t) {
    TimeConstants c;
    c.t = t;
    c.lambda_t = lambda / (1.0 + lambda * t);
    c.beta_t = 1.0 / (1.0 + lambda * t);
    return c;
}

void ViscousParams::validate() const {
    if (!(eps > 0)) throw std::invalid_argument("viscosity must be positive");
    if (!(quad_halfwidth >= 6.0)) throw std::invalid_argument("quadrature window must be at least 6 sqrt(eps t)");
}

double eval_phi(const PotentialSpec& s, Vec2 y) {
    if (s.dim == 1) y.y = 0;
    switch (s.kind) {
        case PotentialKind::zero: return 0.0;
        case PotentialKind::linear: return dot(s.vectors[0], y);
        case PotentialKind::piecewise_linear_min: {
            double m = kInf;
            for (auto v : s.vectors) m = std::min(m, dot(v, y));
            return m;
        }
        case PotentialKind::quadratic_perturbation: return eval_phi(*s.base, y) + 0.5 * s.lambda * norm2(y);
        case PotentialKind::sampled: return s.field->eval(y);
    }
    return 0.0;
}

GradResult eval_phi_grad(const PotentialSpec& s, Vec2 y, double tie_tol) {
    if (s.dim == 1) y.y = 0;
    GradResult g;
    switch (s.kind) {
        case PotentialKind::zero: return g;
        case PotentialKind::linear: g.grad = s.vectors[0]; g.active = {0}; return g;
        case PotentialKind::piecewise_linear_min: {
            double m = kInf;
            for (auto v : s.vectors) m = std::min(m, dot(v, y));
            for (std::size_t i = 0; i < s.vectors.size(); ++i)
                if (dot(s.vectors[i], y) <= m + tie_tol) g.active.push_back(int(i));
            g.grad = s.vectors[g.active[0]];
            for (int i : g.active)
                if (!(s.vectors[i] == g.grad)) g.differentiable = false;
            return g;
        }
        case PotentialKind::quadratic_perturbation: {
            g = eval_phi_grad(*s.base, y, tie_tol);
            g.grad += s.lambda * y;
            return g;
        }
        case PotentialKind::sampled: {
            double d = 1e-7 * s.field->grid.max_spacing();
            g.grad.x = (s.field->eval(y + Vec2{d, 0}) - s.field->eval(y - Vec2{d, 0})) / (2 * d);
            if (s.dim == 2) g.grad.y = (s.field->eval(y + Vec2{0, d}) - s.field->eval(y - Vec2{0, d})) / (2 * d);
            return g;
        }
    }
    return g;
}

namespace {

// inf_y |x-y|^2/2t + v.y + q|y|^2/2, minimizer y = (x - t v)/(1 + q t)
double quad_piece_min(Vec2 x, double t, Vec2 v, double q) {
    Vec2 y = (x - t * v) / (1.0 + q * t);
    return norm2(x - y) / (2 * t) + dot(v, y) + 0.5 * q * norm2(y);
}

double grid_min(const PotentialSpec& s, Vec2 x, double t) {
    const ScalarField& f = *s.field;
    const Grid& g = f.grid;
    double r = s.K * t + 3 * g.max_spacing();
    double best = kInf;
    for (std::size_t k = 0; k < g.size(); ++k) {
        Vec2 y = g.point(k);
        if (norm(y - x) > r) continue;
        best = std::min(best, norm2(x - y) / (2 * t) + f.values[k]);
    }
    if (best == kInf) throw std::out_of_range("hopf_lax_u: no sample within the domain of dependence");
    return best;
}

}  // namespace

double hopf_lax_u(const PotentialSpec& s, Vec2 x, double t) {
    require_t(t);
    if (s.dim == 1) x.y = 0;
    switch (s.kind) {
        case PotentialKind::zero: return 0.0;
        case PotentialKind::linear: return dot(s.vectors[0], x) - 0.5 * t * norm2(s.vectors[0]);
        case PotentialKind::piecewise_linear_min: {
            double m = kInf;
            for (auto v : s.vectors) m = std::min(m, dot(v, x) - 0.5 * t * norm2(v));
            return m;
        }
        case PotentialKind::quadratic_perturbation: {
            const PotentialSpec& b = *s.base;
            if (b.kind == PotentialKind::zero) return quad_piece_min(x, t, {}, s.lambda);
            if (b.kind == PotentialKind::linear || b.kind == PotentialKind::piecewise_linear_min) {
                double m = kInf;
                for (auto v : b.vectors) m = std::min(m, quad_piece_min(x, t, v, s.lambda));
                return m;
            }
            double q = 1.0 + s.lambda * t;
            return hopf_lax_u(b, x / q, t / q) + s.lambda * norm2(x) / (2 * q);
        }
        case PotentialKind::sampled: return grid_min(s, x, t);
    }
    return 0.0;
}

double hopf_lax_w(const PotentialSpec& s, Vec2 x, double t) {
    if (s.dim == 1) x.y = 0;
    return w_from_u(hopf_lax_u(s, x, t), x, t);
}

double psi(const PotentialSpec& s, Vec2 y, double t) {
    if (s.dim == 1) y.y = 0;
    return 0.5 * norm2(y) + t * eval_phi(s, y);
}

ViscousValue cole_hopf_quadrature(const PotentialSpec& s, Vec2 x, double t, const ViscousParams& vp) {
    require_t(t);
    if (s.dim == 1) x.y = 0;
    double eps = vp.eps;
    double logI;
    Vec2 mean;
    lse_integral(s, x, t, vp, [&](Vec2 y) { return -(norm2(x - y) / (2 * t) + eval_phi(s, y)) / eps; }, logI,
                 mean);
    // Gaussian normalization (2 pi eps t)^{-d/2}
    ViscousValue r;
    r.u = -eps * (logI - 0.5 * s.dim * (kLog2Pi + std::log(eps * t)));
    r.grad = (x - mean) / t;
    if (s.dim == 1) r.grad.y = 0;
    return r;
}

ViscousValue cole_hopf(const PotentialSpec& s, Vec2 x, double t, const ViscousParams& vp) {
    require_t(t);
    vp.validate();
    if (s.dim == 1) x.y = 0;
    switch (s.kind) {
        case PotentialKind::zero: return {};
        case PotentialKind::linear:
        case PotentialKind::piecewise_linear_min: return cole_hopf_min(s, x, t, vp.eps);
        default: return cole_hopf_quadrature(s, x, t, vp);
    }
}

double cole_hopf_u(const PotentialSpec& s, Vec2 x, double t, const ViscousParams& vp) {
    return cole_hopf(s, x, t, vp).u;
}

Vec2 cole_hopf_grad(const PotentialSpec& s, Vec2 x, double t, const ViscousParams& vp) {
    return cole_hopf(s, x, t, vp).grad;
}

double soft_legendre_w(const PotentialSpec& s, Vec2 x, double t, const ViscousParams& vp) {
    if (s.dim == 1) x.y = 0;
    return 0.5 * norm2(x) - t * cole_hopf_u(s, x, t, vp);
}

double soft_legendre_w_direct(const PotentialSpec& s, Vec2 x, double t, const ViscousParams& vp) {
    require_t(t);
    vp.validate();
    if (s.dim == 1) x.y = 0;
    double et = vp.eps * t;
    if (s.kind == PotentialKind::zero) return 0.5 * norm2(x);
    if (s.kind == PotentialKind::linear || s.kind == PotentialKind::piecewise_linear_min) {
        // sum over cells of exp(|x - t v_i|^2 / 2 eps t) (2 pi eps t)^{d/2} P_i
        auto terms = min_terms(s, x, t, vp.eps);
        double M = -kInf;
        std::vector<double> L;
        for (auto& term : terms) {
            L.push_back(term.P > 0 ? norm2(x - t * term.v) / (2 * et) + std::log(term.P) : -kInf);
            M = std::max(M, L.back());
        }
        double S = 0;
        for (double l : L)
            if (l > -kInf) S += std::exp(l - M);
        return et * (M + std::log(S));
    }
    double logI;
    Vec2 mean;
    lse_integral(s, x, t, vp, [&](Vec2 y) { return (dot(x, y) - psi(s, y, t)) / et; }, logI, mean);
    return et * logI - 0.5 * s.dim * et * (kLog2Pi + std::log(et));
}

ScalarField sample_phi(const PotentialSpec& s, const Grid& g) {
    return sample(g, [&](Vec2 y) { return eval_phi(s, y); });
}
ScalarField sample_psi(const PotentialSpec& s, const Grid& g, double t) {
    return sample(g, [&](Vec2 y) { return psi(s, y, t); });
}
ScalarField sample_u(const PotentialSpec& s, const Grid& g, double t) {
    return sample(g, [&](Vec2 x) { return hopf_lax_u(s, x, t); });
}
ScalarField sample_w(const PotentialSpec& s, const Grid& g, double t) {
    return sample(g, [&](Vec2 x) { return hopf_lax_w(s, x, t); });
}
ScalarField sample_u_viscous(const PotentialSpec& s, const Grid& g, double t, const ViscousParams& vp) {
    return sample(g, [&](Vec2 x) { return cole_hopf_u(s, x, t, vp); });
}
ScalarField sample_w_viscous(const PotentialSpec& s, const Grid& g, double t, const ViscousParams& vp) {
    return sample(g, [&](Vec2 x) { return soft_legendre_w(s, x, t, vp); });
}

PotentialSpec galilean_transform(const PotentialSpec& s, Vec2 c) {
    if (s.dim == 1) c.y = 0;
    switch (s.kind) {
        case PotentialKind::zero: return PotentialSpec::linear(-c, s.dim);
        case PotentialKind::linear: return PotentialSpec::linear(s.vectors[0] - c, s.dim);
        case PotentialKind::piecewise_linear_min: {
            auto v = s.vectors;
            for (auto& a : v) a -= c;
            return PotentialSpec::min_of(v, s.dim);
        }
        case PotentialKind::quadratic_perturbation: {
            PotentialSpec r = s;
            r.base = std::make_shared<PotentialSpec>(galilean_transform(*s.base, c));
            r.K = s.K + norm(c);
            return r;
        }
        case PotentialKind::sampled: {
            ScalarField f = *s.field;
            for (std::size_t k = 0; k < f.values.size(); ++k) f.values[k] -= dot(c, f.grid.point(k));
            return PotentialSpec::sampled(std::move(f));
        }
    }
    return s;
}

SymmetryReport galilean_check(const PotentialSpec& s, Vec2 c, double t, const Grid& g, const ViscousParams* vp) {
    if (s.dim == 1) c.y = 0;
    PotentialSpec h = galilean_transform(s, c);
    SymmetryReport r;
    for (std::size_t k = 0; k < g.size(); ++k) {
        Vec2 xh = g.point(k);
        Vec2 x = xh + t * c;
        double shift = -dot(c, x) + 0.5 * norm2(c) * t;
        r.inviscid = std::max(r.inviscid, std::abs(hopf_lax_u(h, xh, t) - (hopf_lax_u(s, x, t) + shift)));
        r.w = std::max(r.w, std::abs(hopf_lax_w(h, xh, t) - hopf_lax_w(s, x, t)));
        if (vp) r.viscous = std::max(r.viscous, std::abs(cole_hopf_u(h, xh, t, *vp) - (cole_hopf_u(s, x, t, *vp) + shift)));
        ++r.points;
    }
    return r;
}

double rescale_hat_time(double lambda, double t) {
    if (!(t > 0) || !(lambda >= 0)) throw std::invalid_argument("rescale: need t > 0 and lambda >= 0");
    double th = t / (1.0 + lambda * t);
    if (lambda > 0 && !(th < 1.0 / lambda)) throw std::invalid_argument("rescale: hat time must stay below 1/lambda");
    return th;
}

SymmetryReport lambda_rescale_check(const PotentialSpec& hat, double lambda, double t, const Grid& g,
                                    const ViscousParams* vp) {
    double th = rescale_hat_time(lambda, t);
    PotentialSpec s = PotentialSpec::quadratic(hat, lambda);
    double q = 1.0 + lambda * t;
    SymmetryReport r;
    for (std::size_t k = 0; k < g.size(); ++k) {
        Vec2 x = g.point(k);
        double quad = lambda * norm2(x) / (2 * q);
        double lhs = hopf_lax_u(s, x, t);
        double rhs = hopf_lax_u(hat, x / q, th) + quad;
        r.inviscid = std::max(r.inviscid, std::abs(lhs - rhs));
        if (vp) {
            double lv = cole_hopf_u(s, x, t, *vp);
            // + (eps d / 2) log q: for phi-hat = 0 both sides are the Gaussian integral of
            // lambda |y|^2 / 2, which carries q^(-d/2)
            double rv = cole_hopf_u(hat, x / q, th, *vp) + quad + 0.5 * vp->eps * s.dim * std::log(q);
            r.viscous = std::max(r.viscous, std::abs(lv - rv));
        }
        ++r.points;
    }
    return r;
}

FieldChecks check_fields(const PotentialSpec& s, double t, const Grid& g, const ViscousParams& vp) {
    FieldChecks c;
    c.K = s.K;
    auto u = sample_u(s, g, t);
    auto ue = sample_u_viscous(s, g, t, vp);
    for (auto d : grid_gradient(u)) c.max_grad_u = std::max(c.max_grad_u, norm(d));
    for (auto d : grid_gradient(ue)) c.max_grad_u_eps = std::max(c.max_grad_u_eps, norm(d));
    auto tc = TimeConstants::make(s.lambda, t);
    double minc = kInf, minw = kInf;
    for (std::size_t k = 0; k < g.size(); ++k) {
        auto m = g.multi(k);
        bool inner = m[0] > 0 && m[0] + 1 < g.n[0] && (g.dim == 1 || (m[1] > 0 && m[1] + 1 < g.n[1]));
        if (!inner) continue;
        // largest second difference over the axis and diagonal directions; each one is
        // exact for a quadratic, so lambda_t-concavity bounds it with no stencil error
        double h0 = g.spacing(0);
        double hmax = (ue.at(m[0] + 1, m[1]) - 2 * ue.values[k] + ue.at(m[0] - 1, m[1])) / (h0 * h0);
        if (g.dim == 2) {
            double h1 = g.spacing(1);
            hmax = std::max(hmax, (ue.at(m[0], m[1] + 1) - 2 * ue.values[k] + ue.at(m[0], m[1] - 1)) / (h1 * h1));
            double dd = h0 * h0 + h1 * h1;
            hmax = std::max(hmax, (ue.at(m[0] + 1, m[1] + 1) - 2 * ue.values[k] + ue.at(m[0] - 1, m[1] - 1)) / dd);
            hmax = std::max(hmax, (ue.at(m[0] + 1, m[1] - 1) - 2 * ue.values[k] + ue.at(m[0] - 1, m[1] + 1)) / dd);
        }
        minc = std::min(minc, tc.lambda_t - hmax);
        minw = std::min(minw, (1.0 - t * hmax) - tc.beta_t);
    }
    c.min_concavity = minc;
    c.min_w_eps_eig = minw;
    return c;
}

}  // namespace adhesion
