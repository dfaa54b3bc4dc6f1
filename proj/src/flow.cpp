#include "adhesion/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "adhesion/convexkit.hpp"
#include "adhesion/riemann3.hpp"

namespace adhesion {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool closed_form_base(const PotentialSpec& s) {
    return s.kind == PotentialKind::zero || s.kind == PotentialKind::linear ||
           s.kind == PotentialKind::piecewise_linear_min;
}

// 1D: only the extreme slopes matter; particles inside the shock interval sit at the shock
Vec2 flow_1d_min(const PotentialSpec& s, Vec2 y, double t) {
    double amin = kInf, amax = -kInf;
    for (auto v : s.vectors) amin = std::min(amin, v.x), amax = std::max(amax, v.x);
    double half = 0.5 * t * (amax - amin);
    if (y.x < -half) return {y.x + t * amax, 0.0};
    if (y.x > half) return {y.x + t * amin, 0.0};
    return {0.5 * t * (amin + amax), 0.0};
}

std::size_t pair_budget(std::size_t n) { return n * (n - 1) / 2; }

// all pairs when few, otherwise a fixed pseudo-random sample
template <class F>
void for_pairs(std::size_t n, std::size_t cap, F&& f) {
    if (n < 2) return;
    if (pair_budget(n) <= cap) {
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b) f(a, b);
        return;
    }
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<std::size_t> u(0, n - 1);
    for (std::size_t k = 0; k < cap; ++k) {
        std::size_t a = u(rng), b = u(rng);
        if (a == b) continue;
        f(std::min(a, b), std::max(a, b));
    }
}

}  // namespace

std::size_t PathBundle::time_index(double t) const {
    for (std::size_t k = 0; k < times.size(); ++k)
        if (std::abs(times[k] - t) <= 1e-12 * std::max(1.0, std::abs(t))) return k;
    throw std::invalid_argument("path bundle: time " + fmt17(t) + " was not sampled");
}

std::vector<Vec2> PathBundle::snapshot(double t) const {
    std::size_t k = time_index(t);
    std::vector<Vec2> out(seeds.size());
    for (std::size_t s = 0; s < seeds.size(); ++s) out[s] = at(s, k);
    return out;
}

void PathBundle::validate() const {
    if (times.empty() || times[0] != 0.0) throw std::invalid_argument("path bundle: times must start at 0");
    for (std::size_t k = 1; k < times.size(); ++k)
        if (!(times[k] > times[k - 1])) throw std::invalid_argument("path bundle: times must increase strictly");
    if (positions.size() != seeds.size() * times.size()) throw std::invalid_argument("path bundle: wrong position count");
    for (std::size_t s = 0; s < seeds.size(); ++s)
        if (!(at(s, 0) == seeds[s])) throw std::invalid_argument("path bundle: positions at t = 0 must equal the seeds");
}

void PathBundle::write_csv(std::ostream& os) const {
    os << (dim == 1 ? "seed_index,t,x1\n" : "seed_index,t,x1,x2\n");
    for (std::size_t s = 0; s < seeds.size(); ++s)
        for (std::size_t k = 0; k < times.size(); ++k) {
            Vec2 p = at(s, k);
            os << s << "," << fmt17(times[k]) << "," << fmt17(p.x);
            if (dim == 2) os << "," << fmt17(p.y);
            os << "\n";
        }
}

std::vector<Vec2> grid_seeds(const Grid& g) {
    std::vector<Vec2> out(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) out[k] = g.point(k);
    return out;
}

PathBundle make_bundle(const Grid& seed_grid, std::vector<double> times) {
    PathBundle b;
    b.dim = seed_grid.dim;
    b.seeds = grid_seeds(seed_grid);
    b.times = std::move(times);
    b.seed_volume = seed_grid.cell_volume();
    b.positions.resize(b.seeds.size() * b.times.size());
    return b;
}

Vec2 viscous_velocity(const PotentialSpec& s, Vec2 x, double t, const ViscousParams& vp) {
    t = std::max(t, 1e-12);
    if (s.kind == PotentialKind::quadratic_perturbation && closed_form_base(*s.base)) {
        double q = 1.0 + s.lambda * t;
        return viscous_velocity(*s.base, x / q, t / q, vp) / q + (s.lambda / q) * x;
    }
    return cole_hopf_grad(s, x, t, vp);
}

PathBundle integrate_viscous(const PotentialSpec& s, const std::vector<Vec2>& seeds, const std::vector<double>& times,
                             const ViscousParams& vp, const IntegratorOptions& opt) {
    if (!(vp.eps > 0)) throw std::invalid_argument("integrate_viscous: eps must be positive");
    vp.validate();
    PathBundle b;
    b.dim = s.dim;
    b.seeds = seeds;
    b.times = times;
    b.eps = vp.eps;
    b.positions.resize(seeds.size() * times.size());
    if (times.empty() || times[0] != 0.0) throw std::invalid_argument("integrate_viscous: times must start at 0");
    double K = s.K;
    auto vel = [&](Vec2 x, double t) {
        Vec2 v = viscous_velocity(s, x, t, vp);
        if (s.dim == 1) v.y = 0;
        if (K > 0 && norm(v) > K + opt.K_slack * (1 + K)) {
            std::ostringstream os;
            os << "integrate_viscous: |velocity| " << fmt17(norm(v)) << " exceeds K = " << fmt17(K) << " at t = " << fmt17(t);
            throw std::runtime_error(os.str());
        }
        return v;
    };
    auto rk4 = [&](Vec2 x, double t, double h, Vec2 k1) {
        Vec2 k2 = vel(x + (0.5 * h) * k1, t + 0.5 * h);
        Vec2 k3 = vel(x + (0.5 * h) * k2, t + 0.5 * h);
        Vec2 k4 = vel(x + h * k3, t + h);
        return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    };
    for (std::size_t si = 0; si < seeds.size(); ++si) {
        Vec2 x = seeds[si];
        b.at(si, 0) = x;
        double t = 0.0, h = opt.h0;
        long steps = 0;
        for (std::size_t k = 1; k < times.size(); ++k) {
            double target = times[k];
            while (t < target) {
                bool last = t + h >= target;
                double hs = last ? target - t : h;
                Vec2 k1 = vel(x, t);
                Vec2 full = rk4(x, t, hs, k1);
                Vec2 mid = rk4(x, t, 0.5 * hs, k1);
                Vec2 two = rk4(mid, t + 0.5 * hs, 0.5 * hs, vel(mid, t + 0.5 * hs));
                double err = norm(two - full) / 15.0;
                if (err <= opt.tol || hs <= opt.h_min) {
                    if (err > opt.tol) {
                        std::ostringstream os;
                        os << "integrate_viscous: step below h_min at t = " << fmt17(t) << ", seed " << si
                           << ", error " << fmt17(err);
                        throw std::runtime_error(os.str());
                    }
                    x = two + (two - full) / 15.0;
                    t = last ? target : t + hs;
                    double grow = err > 0 ? 0.9 * std::pow(opt.tol / err, 0.2) : 4.0;
                    if (!last || grow < 1) h = hs * std::clamp(grow, 0.2, 4.0);
                } else {
                    h = hs * std::clamp(0.9 * std::pow(opt.tol / err, 0.2), 0.1, 0.9);
                }
                if (++steps > opt.max_steps) throw std::runtime_error("integrate_viscous: step budget exhausted");
            }
            b.at(si, k) = x;
        }
    }
    return b;
}

std::vector<double> default_eps_ladder() { return {0.2, 0.1, 0.05, 0.025, 0.0125}; }

bool has_exact_flow(const PotentialSpec& s) {
    switch (s.kind) {
        case PotentialKind::zero:
        case PotentialKind::linear: return true;
        case PotentialKind::piecewise_linear_min: return s.dim == 1 || s.is_three_sector() || s.vectors.size() == 1;
        case PotentialKind::quadratic_perturbation: return has_exact_flow(*s.base);
        default: return false;
    }
}

namespace {

template <class Planar>
Vec2 exact_map(const PotentialSpec& s, Vec2 y, double t, Planar&& planar) {
    if (s.dim == 1) y.y = 0;
    switch (s.kind) {
        case PotentialKind::zero: return y;
        case PotentialKind::linear: return y + t * s.vectors[0];
        case PotentialKind::piecewise_linear_min:
            if (s.dim == 1) return flow_1d_min(s, y, t);
            if (s.vectors.size() == 1) return y + t * s.vectors[0];
            if (s.is_three_sector()) return planar(build(s), y, t);
            break;
        case PotentialKind::quadratic_perturbation: {
            // X_t = q Xhat_{t/q}, q = 1 + lambda t
            double q = 1.0 + s.lambda * t;
            return q * exact_map(*s.base, y, t / q, planar);
        }
        default: break;
    }
    throw std::invalid_argument("no closed-form flow for this potential");
}

}  // namespace

Vec2 exact_flow(const PotentialSpec& s, Vec2 y, double t) {
    return exact_map(s, y, t, [](const ThreeSectorProblem& p, Vec2 a, double b) { return exact_X(p, a, b); });
}

Vec2 exact_transport(const PotentialSpec& s, Vec2 y, double t) {
    return exact_map(s, y, t, [](const ThreeSectorProblem& p, Vec2 a, double b) { return exact_T(p, a, b); });
}

PathBundle limit_flow(const PotentialSpec& s, const std::vector<Vec2>& seeds, const std::vector<double>& times,
                      const std::vector<double>& eps_ladder, const LadderOptions& opt) {
    if (times.empty() || times[0] != 0.0) throw std::invalid_argument("limit_flow: times must start at 0");
    if (opt.fast_path && has_exact_flow(s)) {
        PathBundle b;
        b.dim = s.dim;
        b.seeds = seeds;
        b.times = times;
        b.positions.resize(seeds.size() * times.size());
        for (std::size_t i = 0; i < seeds.size(); ++i)
            for (std::size_t k = 0; k < times.size(); ++k)
                b.at(i, k) = k == 0 ? seeds[i] : exact_flow(s, seeds[i], times[k]);
        return b;
    }
    if (eps_ladder.size() < 3) throw std::invalid_argument("limit_flow: ladder needs at least 3 rungs");
    for (std::size_t k = 1; k < eps_ladder.size(); ++k)
        if (!(eps_ladder[k] < eps_ladder[k - 1])) throw std::invalid_argument("limit_flow: ladder must decrease");
    PathBundle prev, cur;
    std::vector<double> dec;
    bool done = false;
    for (std::size_t r = 0; r < eps_ladder.size() && !done; ++r) {
        ViscousParams vp = opt.base;
        vp.eps = eps_ladder[r];
        cur = integrate_viscous(s, seeds, times, vp, opt.integ);
        if (r > 0) {
            double gap = 0;
            for (std::size_t k = 0; k < cur.positions.size(); ++k)
                gap = std::max(gap, norm(cur.positions[k] - prev.positions[k]));
            dec.push_back(gap);
            done = gap < opt.tol;
        }
        prev = cur;
    }
    cur.rung_eps = cur.eps;
    cur.eps = 0.0;
    cur.decrements = dec;
    cur.converged = done;
    return cur;
}

namespace {

// subgradient of u_t at x, closed form where available, otherwise from a local grid of w_t
class DuOracle {
public:
    explicit DuOracle(const PotentialSpec& s) : s_(s) {}

    SubgradientSet at(Vec2 x, double t) {
        if (has_exact_flow(s_)) return exact(s_, x, t);
        auto it = est_.find(t);
        if (it == est_.end()) throw std::logic_error("inclusion_residual: no grid prepared for this time");
        SubgradientSet w = it->second.at(x);
        // du = (x - dw) / t
        std::vector<Vec2> pts;
        if (w.dim == 1) {
            pts = {{(x.x - w.lo) / t, 0}, {(x.x - w.hi) / t, 0}};
            return SubgradientSet::interval((x.x - w.hi) / t, (x.x - w.lo) / t);
        }
        for (auto v : w.vertices) pts.push_back((x - v) / t);
        return SubgradientSet::from_points(pts);
    }

    void prepare(double t, Vec2 lo, Vec2 hi) {
        if (has_exact_flow(s_) || est_.count(t)) return;
        double pad = 0.1 * std::max(hi.x - lo.x, s_.dim == 2 ? hi.y - lo.y : 0.0) + 1e-3;
        Grid g = s_.dim == 1 ? Grid::line(lo.x - pad, hi.x + pad, 257)
                             : Grid::box(lo - Vec2{pad, pad}, hi + Vec2{pad, pad}, 97);
        est_.emplace(t, SubgradientEstimator(sample_w(s_, g, t)));
    }

private:
    static SubgradientSet exact(const PotentialSpec& s, Vec2 x, double t) {
        switch (s.kind) {
            case PotentialKind::zero: return s.dim == 1 ? SubgradientSet::interval(0, 0) : SubgradientSet::from_points({{0, 0}});
            case PotentialKind::linear:
                return s.dim == 1 ? SubgradientSet::interval(s.vectors[0].x, s.vectors[0].x)
                                  : SubgradientSet::from_points({s.vectors[0]});
            case PotentialKind::piecewise_linear_min: {
                if (s.dim == 1) {
                    double amin = kInf, amax = -kInf;
                    for (auto v : s.vectors) amin = std::min(amin, v.x), amax = std::max(amax, v.x);
                    double xs = 0.5 * t * (amin + amax);
                    double tol = 1e-12 * std::max(1.0, std::abs(x.x));
                    if (std::abs(x.x - xs) <= tol) return SubgradientSet::interval(amin, amax);
                    return x.x < xs ? SubgradientSet::interval(amax, amax) : SubgradientSet::interval(amin, amin);
                }
                if (s.vectors.size() == 1) return SubgradientSet::from_points({s.vectors[0]});
                return exact_du(build(s), x, t);
            }
            case PotentialKind::quadratic_perturbation: {
                double q = 1.0 + s.lambda * t;
                SubgradientSet h = exact(*s.base, x / q, t / q);
                if (h.dim == 1) return SubgradientSet::interval(h.lo / q + s.lambda * x.x / q, h.hi / q + s.lambda * x.x / q);
                std::vector<Vec2> pts;
                for (auto v : h.vertices) pts.push_back(v / q + (s.lambda / q) * x);
                return SubgradientSet::from_points(pts);
            }
            default: break;
        }
        throw std::logic_error("no closed-form subgradient");
    }

    const PotentialSpec& s_;
    std::map<double, SubgradientEstimator> est_;
};

}  // namespace

InclusionReport inclusion_residual(const PathBundle& b, const PotentialSpec& s) {
    if (b.eps != 0.0) throw std::invalid_argument("inclusion_residual: needs a limit-flow bundle");
    InclusionReport r;
    std::size_t nt = b.n_times();
    if (nt < 3) return r;
    DuOracle du(s);
    for (std::size_t k = 1; k + 1 < nt; ++k) {
        Vec2 lo{kInf, kInf}, hi{-kInf, -kInf};
        for (std::size_t i = 0; i < b.n_seeds(); ++i) {
            Vec2 p = b.at(i, k);
            lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
            hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
        }
        du.prepare(b.times[k], lo, hi);
    }
    double K = std::max(1.0, s.K);
    for (std::size_t i = 0; i < b.n_seeds(); ++i)
        for (std::size_t k = 1; k + 1 < nt; ++k) {
            double tm = b.times[k];
            Vec2 x = b.at(i, k);
            Vec2 fwd = (b.at(i, k + 1) - x) / (b.times[k + 1] - tm);
            Vec2 bwd = (x - b.at(i, k - 1)) / (tm - b.times[k - 1]);
            SubgradientSet set = du.at(x, tm);
            auto dist = [&](Vec2 v) { return set.dim == 1 ? std::max({0.0, set.lo - v.x, v.x - set.hi}) : set.distance(v); };
            double res;
            if (norm(fwd - bwd) > 1e-9 * K) {
                // a kink between the samples: one side is clean
                res = std::min(dist(fwd), dist(bwd));
                ++r.one_sided;
            } else {
                Vec2 c = (b.at(i, k + 1) - b.at(i, k - 1)) / (b.times[k + 1] - b.times[k - 1]);
                res = dist(c);
            }
            r.residuals.push_back(res);
            r.max_residual = std::max(r.max_residual, res);
            ++r.samples;
        }
    return r;
}

ContractionReport contraction_check(const PathBundle& b, double lambda, double tol, double delta_stick) {
    ContractionReport r;
    r.delta_stick = delta_stick >= 0 ? delta_stick : 2.0 * (tol + b.eps * b.dim);
    std::size_t nt = b.n_times();
    if (nt < 2 || b.n_seeds() < 2) throw std::invalid_argument("contraction_check: need 2 seeds and 2 times");
    for_pairs(b.n_seeds(), 400000, [&](std::size_t y, std::size_t z) {
        ++r.pairs;
        double best = kInf;
        std::size_t best_k = 0;
        bool stuck = false;
        std::size_t stuck_k = 0;
        bool bad_c = false, bad_s = false;
        for (std::size_t k = 0; k < nt; ++k) {
            double raw = norm(b.at(y, k) - b.at(z, k));
            double w = raw / (1.0 + lambda * b.times[k]);
            if (!bad_c && w > best + tol) {
                r.contraction.push_back({y, z, b.times[best_k], b.times[k], w - best});
                bad_c = true;
            }
            if (w < best) best = w, best_k = k;
            if (stuck && !bad_s && raw > r.delta_stick + tol) {
                r.sticking.push_back({y, z, b.times[stuck_k], b.times[k], raw - r.delta_stick});
                bad_s = true;
            }
            if (!stuck && raw < r.delta_stick) stuck = true, stuck_k = k;
        }
    });
    return r;
}

SemiflowReport semiflow_map(const PathBundle& b, double s, double r, double t, double lambda, double merge_tol) {
    if (!(s <= r && r <= t)) throw std::invalid_argument("semiflow_map: need s <= r <= t");
    std::size_t ks = b.time_index(s), kr = b.time_index(r), kt = b.time_index(t);
    SemiflowReport rep;
    rep.s = s;
    rep.r = r;
    rep.t = t;
    rep.lipschitz_bound = (1.0 + lambda * t) / (1.0 + lambda * s);
    std::size_t n = b.n_seeds();
    rep.points = int(n);
    // well-definedness: labels sharing a source at time a share their image at time c
    auto merged_gap = [&](std::size_t ka, std::size_t kc) {
        std::map<std::pair<long long, long long>, std::size_t> first;
        double gap = 0;
        for (std::size_t i = 0; i < n; ++i) {
            Vec2 p = b.at(i, ka);
            std::pair<long long, long long> key{std::llround(p.x / merge_tol), std::llround(p.y / merge_tol)};
            auto it = first.find(key);
            if (it == first.end()) {
                first.emplace(key, i);
                continue;
            }
            gap = std::max(gap, norm(b.at(i, kc) - b.at(it->second, kc)));
        }
        return gap;
    };
    rep.assoc_error = std::max({merged_gap(ks, kt), merged_gap(ks, kr), merged_gap(kr, kt)});
    for_pairs(n, 400000, [&](std::size_t y, std::size_t z) {
        double ds = norm(b.at(y, ks) - b.at(z, ks));
        if (ds <= merge_tol) return;
        rep.lipschitz = std::max(rep.lipschitz, norm(b.at(y, kt) - b.at(z, kt)) / ds);
    });
    return rep;
}

std::vector<double> jacobian_det(const Grid& g, const std::vector<Vec2>& image) {
    if (image.size() != g.size()) throw std::invalid_argument("jacobian_det: image does not match the grid");
    std::vector<double> out(g.size());
    auto diff = [&](int axis, int i, int j) {
        int n = g.n[axis];
        int c = axis == 0 ? i : j;
        int a = std::max(0, c - 1), b2 = std::min(n - 1, c + 1);
        std::size_t ka = axis == 0 ? g.index(a, j) : g.index(i, a);
        std::size_t kb = axis == 0 ? g.index(b2, j) : g.index(i, b2);
        return (image[kb] - image[ka]) / ((b2 - a) * g.spacing(axis));
    };
    int n1 = g.dim == 2 ? g.n[1] : 1;
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < n1; ++j) {
            Vec2 dx = diff(0, i, j);
            if (g.dim == 1) {
                out[g.index(i)] = dx.x;
                continue;
            }
            Vec2 dy = diff(1, i, j);
            out[g.index(i, j)] = dx.x * dy.y - dx.y * dy.x;
        }
    return out;
}

CollisionFreeResult collision_free_flow(const PotentialSpec& s, double t_star, const Grid& seed_grid,
                                        const std::vector<double>& times, bool allow_closed_form) {
    if (!(t_star > 0)) throw std::invalid_argument("collision_free_flow: t_star must be positive");
    for (double tm : times)
        if (tm < 0 || tm > t_star) throw std::invalid_argument("collision_free_flow: times must lie in [0, t_star]");
    CollisionFreeResult r;
    r.bundle = make_bundle(seed_grid, times);
    std::size_t N = seed_grid.size();
    std::vector<Vec2> slope(N);  // grad phi-breve
    r.closed_form = allow_closed_form && has_exact_flow(s);
    std::vector<Vec2> T(N);
    if (r.closed_form) {
        for (std::size_t k = 0; k < N; ++k) {
            Vec2 y = seed_grid.point(k);
            T[k] = exact_transport(s, y, t_star);
            slope[k] = (T[k] - y) / t_star;
        }
    } else {
        // convexify over the seed window padded by K t*, same spacing, then restrict
        Grid pg = seed_grid;
        std::array<int, 2> off{0, 0};
        for (int a = 0; a < seed_grid.dim; ++a) {
            double h = seed_grid.spacing(a);
            off[a] = int(std::ceil(s.K * t_star / h));
            pg.lo[a] -= off[a] * h;
            pg.hi[a] += off[a] * h;
            pg.n[a] += 2 * off[a];
        }
        ScalarField psi = sample_psi(s, pg, t_star);
        ScalarField cv = convexify(psi);
        for (std::size_t k = 0; k < pg.size(); ++k)
            if (cv.values[k] > psi.values[k] + 1e-9 * (1 + std::abs(psi.values[k])))
                throw std::logic_error("collision_free_flow: convexification exceeds psi");
        std::vector<double> pb(pg.size());
        for (std::size_t k = 0; k < pg.size(); ++k) pb[k] = (cv.values[k] - 0.5 * norm2(pg.point(k))) / t_star;
        auto pslope = grid_gradient(ScalarField(pg, pb));
        auto pT = grid_gradient(cv);
        std::vector<double> own(N);
        for (std::size_t k = 0; k < N; ++k) {
            auto m = seed_grid.multi(k);
            std::size_t kp = pg.index(m[0] + off[0], m[1] + off[1]);
            own[k] = pb[kp];
            slope[k] = pslope[kp];
            T[k] = has_exact_flow(s) ? exact_transport(s, seed_grid.point(k), t_star) : pT[kp];
        }
        r.phi_breve = ScalarField(seed_grid, own);
    }
    for (std::size_t k = 0; k < N; ++k) {
        Vec2 y = seed_grid.point(k);
        r.max_gap_T = std::max(r.max_gap_T, norm(y + t_star * slope[k] - T[k]));
        for (std::size_t j = 0; j < times.size(); ++j) r.bundle.at(k, j) = y + times[j] * slope[k];
    }
    for (std::size_t j = 0; j < times.size(); ++j) {
        std::vector<Vec2> img(N);
        for (std::size_t k = 0; k < N; ++k) img[k] = r.bundle.at(k, j);
        auto det = jacobian_det(seed_grid, img);
        r.min_det.push_back(*std::min_element(det.begin(), det.end()));
    }
    return r;
}

}  // namespace adhesion
