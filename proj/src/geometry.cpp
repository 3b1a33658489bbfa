#include "hklab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hklab {

namespace {

double point_segment_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                              const Eigen::Vector2d& b, Eigen::Vector2d* closest = nullptr) {
    const Eigen::Vector2d ab = b - a;
    const double t = std::clamp(ab.dot(p - a) / ab.squaredNorm(), 0.0, 1.0);
    const Eigen::Vector2d q = a + t * ab;
    if (closest) *closest = q;
    return (p - q).norm();
}

// Nearest point on the ellipse (a cos t, b sin t) to an interior point, by Newton
// iteration on the stationarity condition, started from several angles.
Eigen::Vector2d ellipse_nearest(double a, double b, const Eigen::Vector2d& p) {
    double best_d = std::numeric_limits<double>::max();
    Eigen::Vector2d best(a, 0.0);
    for (int s = 0; s < 8; ++s) {
        double t = std::atan2(a * p.y(), b * p.x()) + s * (M_PI / 4.0);
        for (int it = 0; it < 60; ++it) {
            const double ct = std::cos(t), st = std::sin(t);
            const Eigen::Vector2d q(a * ct, b * st);
            const Eigen::Vector2d dq(-a * st, b * ct);
            const Eigen::Vector2d ddq(-a * ct, -b * st);
            const double f = dq.dot(q - p);
            const double fp = ddq.dot(q - p) + dq.squaredNorm();
            if (std::abs(fp) < 1e-300) break;
            const double step = f / fp;
            t -= step;
            if (std::abs(step) < 1e-15) break;
        }
        const Eigen::Vector2d q(a * std::cos(t), b * std::sin(t));
        const double d = (p - q).norm();
        if (d < best_d) {
            best_d = d;
            best = q;
        }
    }
    return best;
}

void require_inside(const DomainSpec& dom, const Vec& x) {
    if (!contains(dom, x)) throw std::domain_error("point outside the domain closure");
}

}  // namespace

bool DomainSpec::convex() const { return true; }  // all implemented kinds are convex

double DomainSpec::inradius() const {
    switch (kind) {
        case DomainKind::ball:
            return radius;
        case DomainKind::box:
            return 0.5 * (hi - lo).minCoeff();
        case DomainKind::ellipse:
            return std::min(semi_a, semi_b);
        case DomainKind::polygon: {
            // Chebyshev center distance via coarse sampling refined by local search.
            Vec blo = bbox_lo(), bhi = bbox_hi();
            double best = 0.0;
            const int M = 64;
            for (int i = 0; i < M; ++i)
                for (int j = 0; j < M; ++j) {
                    Vec p(2);
                    p << blo[0] + (i + 0.5) / M * (bhi[0] - blo[0]),
                        blo[1] + (j + 0.5) / M * (bhi[1] - blo[1]);
                    if (!contains(*this, p)) continue;
                    best = std::max(best, distance(*this, p));
                }
            return best;
        }
    }
    return 0.0;
}

Vec DomainSpec::bbox_lo() const {
    switch (kind) {
        case DomainKind::ball:
            return Vec::Constant(dim, -radius);
        case DomainKind::box:
            return lo;
        case DomainKind::ellipse: {
            Vec v(2);
            v << -semi_a, -semi_b;
            return v;
        }
        case DomainKind::polygon: {
            Vec v = Vec::Constant(2, std::numeric_limits<double>::max());
            for (const auto& p : vertices) {
                v[0] = std::min(v[0], p.x());
                v[1] = std::min(v[1], p.y());
            }
            return v;
        }
    }
    return Vec();
}

Vec DomainSpec::bbox_hi() const {
    switch (kind) {
        case DomainKind::ball:
            return Vec::Constant(dim, radius);
        case DomainKind::box:
            return hi;
        case DomainKind::ellipse: {
            Vec v(2);
            v << semi_a, semi_b;
            return v;
        }
        case DomainKind::polygon: {
            Vec v = Vec::Constant(2, -std::numeric_limits<double>::max());
            for (const auto& p : vertices) {
                v[0] = std::max(v[0], p.x());
                v[1] = std::max(v[1], p.y());
            }
            return v;
        }
    }
    return Vec();
}

std::string DomainSpec::describe() const {
    std::ostringstream os;
    switch (kind) {
        case DomainKind::ball:
            os << "ball(N=" << dim << ",R=" << radius << ")";
            break;
        case DomainKind::box:
            os << "box(N=" << dim << ",lo=" << lo.transpose() << ",hi=" << hi.transpose() << ")";
            break;
        case DomainKind::ellipse:
            os << "ellipse(a=" << semi_a << ",b=" << semi_b << ")";
            break;
        case DomainKind::polygon:
            os << "polygon(nv=" << vertices.size() << ")";
            break;
    }
    return os.str();
}

DomainSpec DomainSpec::ball_domain(int dim, double R) {
    if (R <= 0 || dim < 1) throw std::invalid_argument("ball domain needs R>0, dim>=1");
    DomainSpec d;
    d.kind = DomainKind::ball;
    d.dim = dim;
    d.radius = R;
    return d;
}

DomainSpec DomainSpec::box_domain(const Vec& lo, const Vec& hi) {
    if (lo.size() != hi.size() || lo.size() < 1) throw std::invalid_argument("bad box extents");
    if (((hi - lo).array() <= 0).any()) throw std::invalid_argument("box sides must be positive");
    DomainSpec d;
    d.kind = DomainKind::box;
    d.dim = static_cast<int>(lo.size());
    d.lo = lo;
    d.hi = hi;
    return d;
}

DomainSpec DomainSpec::unit_box(int dim) {
    return box_domain(Vec::Zero(dim), Vec::Ones(dim));
}

DomainSpec DomainSpec::polygon_domain(std::vector<Eigen::Vector2d> verts) {
    if (verts.size() < 3) throw std::invalid_argument("polygon needs >= 3 vertices");
    // Enforce counter-clockwise orientation and convex position.
    double area2 = 0;
    for (std::size_t i = 0; i < verts.size(); ++i) {
        const auto& a = verts[i];
        const auto& b = verts[(i + 1) % verts.size()];
        area2 += a.x() * b.y() - b.x() * a.y();
    }
    if (area2 < 0) std::reverse(verts.begin(), verts.end());
    const std::size_t n = verts.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = verts[i];
        const auto& b = verts[(i + 1) % n];
        const auto& c = verts[(i + 2) % n];
        const double cross = (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
        if (cross < 0) throw std::invalid_argument("polygon vertices not in convex position");
    }
    DomainSpec d;
    d.kind = DomainKind::polygon;
    d.dim = 2;
    d.vertices = std::move(verts);
    return d;
}

DomainSpec DomainSpec::ellipse_domain(double a, double b) {
    if (a <= 0 || b <= 0) throw std::invalid_argument("ellipse needs positive semi-axes");
    DomainSpec d;
    d.kind = DomainKind::ellipse;
    d.dim = 2;
    d.semi_a = a;
    d.semi_b = b;
    return d;
}

bool contains(const DomainSpec& dom, const Vec& x) {
    if (x.size() != dom.dim) throw std::invalid_argument("point dimension mismatch");
    const double eps = 1e-14;
    switch (dom.kind) {
        case DomainKind::ball:
            return x.norm() <= dom.radius * (1 + eps);
        case DomainKind::box:
            return (x.array() >= dom.lo.array() - eps).all() &&
                   (x.array() <= dom.hi.array() + eps).all();
        case DomainKind::ellipse:
            return sqr(x[0] / dom.semi_a) + sqr(x[1] / dom.semi_b) <= 1 + eps;
        case DomainKind::polygon: {
            const std::size_t n = dom.vertices.size();
            for (std::size_t i = 0; i < n; ++i) {
                const auto& a = dom.vertices[i];
                const auto& b = dom.vertices[(i + 1) % n];
                const double cross =
                    (b.x() - a.x()) * (x[1] - a.y()) - (b.y() - a.y()) * (x[0] - a.x());
                if (cross < -eps) return false;
            }
            return true;
        }
    }
    return false;
}

double distance(const DomainSpec& dom, const Vec& x) {
    require_inside(dom, x);
    switch (dom.kind) {
        case DomainKind::ball:
            return std::max(0.0, dom.radius - x.norm());
        case DomainKind::box: {
            double d = std::numeric_limits<double>::max();
            for (int k = 0; k < dom.dim; ++k)
                d = std::min({d, x[k] - dom.lo[k], dom.hi[k] - x[k]});
            return std::max(0.0, d);
        }
        case DomainKind::ellipse: {
            const Eigen::Vector2d p(x[0], x[1]);
            return (p - ellipse_nearest(dom.semi_a, dom.semi_b, p)).norm();
        }
        case DomainKind::polygon: {
            const Eigen::Vector2d p(x[0], x[1]);
            double d = std::numeric_limits<double>::max();
            const std::size_t n = dom.vertices.size();
            for (std::size_t i = 0; i < n; ++i)
                d = std::min(d, point_segment_distance(p, dom.vertices[i],
                                                       dom.vertices[(i + 1) % n]));
            return d;
        }
    }
    return 0.0;
}

Vec nearest_boundary_point(const DomainSpec& dom, const Vec& x) {
    require_inside(dom, x);
    switch (dom.kind) {
        case DomainKind::ball: {
            const double nx = x.norm();
            if (nx < 1e-14) throw std::domain_error("ball center has no unique projection");
            return (dom.radius / nx) * x;
        }
        case DomainKind::box: {
            int karg = 0;
            double best = std::numeric_limits<double>::max();
            double target = 0;
            for (int k = 0; k < dom.dim; ++k) {
                if (x[k] - dom.lo[k] < best) {
                    best = x[k] - dom.lo[k];
                    karg = k;
                    target = dom.lo[k];
                }
                if (dom.hi[k] - x[k] < best) {
                    best = dom.hi[k] - x[k];
                    karg = k;
                    target = dom.hi[k];
                }
            }
            Vec p = x;
            p[karg] = target;
            return p;
        }
        case DomainKind::ellipse: {
            const Eigen::Vector2d q = ellipse_nearest(dom.semi_a, dom.semi_b, {x[0], x[1]});
            Vec p(2);
            p << q.x(), q.y();
            return p;
        }
        case DomainKind::polygon: {
            const Eigen::Vector2d p2(x[0], x[1]);
            Eigen::Vector2d best_q;
            double best = std::numeric_limits<double>::max();
            const std::size_t n = dom.vertices.size();
            for (std::size_t i = 0; i < n; ++i) {
                Eigen::Vector2d q;
                const double d = point_segment_distance(p2, dom.vertices[i],
                                                        dom.vertices[(i + 1) % n], &q);
                if (d < best) {
                    best = d;
                    best_q = q;
                }
            }
            Vec p(2);
            p << best_q.x(), best_q.y();
            return p;
        }
    }
    return x;
}

DistanceCalculus distance_calculus(const DomainSpec& dom, const Vec& x) {
    require_inside(dom, x);
    DistanceCalculus out;
    const double ridge_tol = 1e-10;
    switch (dom.kind) {
        case DomainKind::ball: {
            const double nx = x.norm();
            if (nx < ridge_tol) throw std::domain_error("distance not differentiable at the center");
            out.grad = -x / nx;
            out.lap = -(dom.dim - 1) / nx;
            return out;
        }
        case DomainKind::box: {
            double d1 = std::numeric_limits<double>::max(), d2 = d1;
            int karg = 0;
            double sign = 1.0;
            for (int k = 0; k < dom.dim; ++k) {
                for (int side = 0; side < 2; ++side) {
                    const double dk = side ? dom.hi[k] - x[k] : x[k] - dom.lo[k];
                    if (dk < d1) {
                        d2 = d1;
                        d1 = dk;
                        karg = k;
                        sign = side ? -1.0 : 1.0;
                    } else if (dk < d2) {
                        d2 = dk;
                    }
                }
            }
            if (d2 - d1 < ridge_tol) throw std::domain_error("ridge point of the box distance");
            out.grad = Vec::Zero(dom.dim);
            out.grad[karg] = sign;
            out.lap = 0.0;
            return out;
        }
        case DomainKind::ellipse: {
            const Eigen::Vector2d p(x[0], x[1]);
            const Eigen::Vector2d q = ellipse_nearest(dom.semi_a, dom.semi_b, p);
            const double d = (p - q).norm();
            if (d < ridge_tol) {
                out.grad = Vec::Zero(2);
                out.lap = 0;
                return out;
            }
            // curvature of the ellipse at the projection point
            const double t = std::atan2(q.y() / dom.semi_b, q.x() / dom.semi_a);
            const double a = dom.semi_a, b = dom.semi_b;
            const double den = std::pow(sqr(a * std::sin(t)) + sqr(b * std::cos(t)), 1.5);
            const double kappa = a * b / den;
            if (kappa * d >= 1 - 1e-9)
                throw std::domain_error("point beyond the focal ridge of the ellipse");
            out.grad = Vec(2);
            out.grad << (x[0] - q.x()) / d, (x[1] - q.y()) / d;
            out.lap = -kappa / (1 - kappa * d);
            return out;
        }
        case DomainKind::polygon: {
            const Eigen::Vector2d p(x[0], x[1]);
            const std::size_t n = dom.vertices.size();
            double d1 = std::numeric_limits<double>::max(), d2 = d1;
            Eigen::Vector2d qbest;
            for (std::size_t i = 0; i < n; ++i) {
                Eigen::Vector2d q;
                const double d = point_segment_distance(p, dom.vertices[i],
                                                        dom.vertices[(i + 1) % n], &q);
                if (d < d1) {
                    d2 = d1;
                    d1 = d;
                    qbest = q;
                } else if (d < d2) {
                    d2 = d;
                }
            }
            if (d2 - d1 < ridge_tol) throw std::domain_error("ridge point of the polygon distance");
            out.grad = Vec(2);
            out.grad << (x[0] - qbest.x()) / d1, (x[1] - qbest.y()) / d1;
            out.lap = 0.0;
            return out;
        }
    }
    throw std::logic_error("unreachable");
}

double weight_value(const DomainSpec& dom, const WeightParams& w, const Vec& x) {
    double v = 1.0;
    if (w.lambda != 0.0) v *= std::pow(x.norm(), w.lambda);
    if (w.alpha != 0.0) {
        const double d = contains(dom, x) ? distance(dom, x) : 0.0;
        v *= std::pow(d, w.alpha);
    }
    return v;
}

bool BallSpec::member(const DomainSpec& dom, const Vec& y) const {
    if (kind == BallKind::euclidean) return (y - center).norm() <= r;
    // tangential cube
    for (int k = 0; k < tangent.rows(); ++k)
        if (std::abs(tangent.row(k).dot(y - boundary_point)) > r) return false;
    // boundary offset window (d(center)-r, d(center)+r); flat charts measure the
    // offset against the face plane, curved charts use the exact distance and
    // only track the interior side of the surface.
    double z;
    if (flat_chart) {
        z = outward_normal.dot(boundary_point - y);
    } else {
        if (!contains(dom, y)) return false;
        z = distance(dom, y);
    }
    return z > center_dist - r && z < center_dist + r;
}

void BallSpec::bounding_box(Vec& blo, Vec& bhi) const {
    if (kind == BallKind::euclidean) {
        blo = center.array() - r;
        bhi = center.array() + r;
        return;
    }
    const double half = r * std::sqrt(static_cast<double>(center.size())) + (center_dist + r);
    blo = boundary_point.array() - half;
    bhi = boundary_point.array() + half;
}

BallSpec make_ball(const DomainSpec& dom, const Vec& x, double r, double gamma) {
    if (gamma <= 1.0 || gamma >= 2.0) throw std::invalid_argument("gamma must lie in (1,2)");
    if (r <= 0) throw std::invalid_argument("ball radius must be positive");
    if (r >= dom.chart_scale())
        throw std::invalid_argument("ball radius >= chart scale of the domain");
    BallSpec b;
    b.center = x;
    b.r = r;
    b.gamma = gamma;
    b.center_dist = distance(dom, x);
    if (b.center_dist >= gamma * r) {
        b.kind = BallKind::euclidean;
        return b;
    }
    b.kind = BallKind::boundary_adapted;
    b.boundary_point = nearest_boundary_point(dom, x);
    const int N = dom.dim;
    Vec n_out(N);
    if (b.center_dist > 1e-13) {
        n_out = (b.boundary_point - x) / (b.boundary_point - x).norm();
    } else {
        // center on the boundary: outward normal from the shape itself
        switch (dom.kind) {
            case DomainKind::ball:
                n_out = x / x.norm();
                break;
            case DomainKind::ellipse: {
                Vec g(2);
                g << x[0] / sqr(dom.semi_a), x[1] / sqr(dom.semi_b);
                n_out = g / g.norm();
                break;
            }
            default: {
                // flat shapes: probe slightly inside and reuse the gradient
                Vec probe = x;
                const Vec c = 0.5 * (dom.bbox_lo() + dom.bbox_hi());
                probe += 1e-9 * (c - x);
                const auto dc = distance_calculus(dom, probe);
                n_out = -dc.grad;
            }
        }
    }
    b.outward_normal = n_out;
    b.flat_chart = dom.kind == DomainKind::box || dom.kind == DomainKind::polygon;
    // tangent frame: complete n_out to an orthonormal basis
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(N, N) - n_out * n_out.transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullU);
    b.tangent = svd.matrixU().leftCols(N - 1).transpose();
    return b;
}

double weighted_volume(const DomainSpec& dom, const WeightParams& w, const BallSpec& ball,
                       double rel_tol, int max_level) {
    Vec blo, bhi;
    ball.bounding_box(blo, bhi);
    // clip to the domain bounding box
    const Vec dlo = dom.bbox_lo(), dhi = dom.bbox_hi();
    for (int k = 0; k < dom.dim; ++k) {
        blo[k] = std::max(blo[k], dlo[k]);
        bhi[k] = std::min(bhi[k], dhi[k]);
    }
    const int N = dom.dim;
    double prev = -1.0;
    double value = 0.0;
    int M = 12;
    for (int level = 0; level <= max_level; ++level, M *= 2) {
        double sum = 0.0;
        const Vec step = (bhi - blo) / M;
        const double cellvol = step.prod();
        if (cellvol <= 0) return 0.0;
        std::vector<int> idx(N, 0);
        Vec y(N);
        while (true) {
            for (int k = 0; k < N; ++k) y[k] = blo[k] + (idx[k] + 0.5) * step[k];
            if (contains(dom, y) && ball.member(dom, y)) {
                const double wv = weight_value(dom, w, y);
                if (std::isfinite(wv)) sum += wv;
            }
            int k = 0;
            while (k < N && ++idx[k] == M) idx[k++] = 0;
            if (k == N) break;
        }
        value = sum * cellvol;
        if (prev >= 0 && std::abs(value - prev) <= rel_tol * std::max(value, 1e-300)) return value;
        prev = value;
    }
    return value;
}

static double volume_shape(const DomainSpec& dom, const WeightParams& w, const Vec& x, double r) {
    const double d = distance(dom, x);
    const double nx = x.norm();
    const double s1 = std::pow(d, w.alpha) * std::pow(nx + r, w.lambda);
    const double s2 = std::pow(r, w.alpha);
    return std::max(s1, s2) * std::pow(r, dom.dim);
}

VolumeFit volume_envelope_fit(const DomainSpec& dom, const WeightParams& w,
                              const std::vector<std::pair<Vec, double>>& samples,
                              double quad_tol) {
    if (samples.empty()) throw std::invalid_argument("empty sample set");
    VolumeFit fit;
    fit.c1 = std::numeric_limits<double>::max();
    fit.c2 = 0.0;
    for (const auto& [x, r] : samples) {
        const BallSpec b = make_ball(dom, x, r);
        VolumeSample vs;
        vs.x = x;
        vs.r = r;
        vs.volume = weighted_volume(dom, w, b, quad_tol);
        vs.shape = volume_shape(dom, w, x, r);
        vs.ratio = vs.volume / vs.shape;
        fit.c1 = std::min(fit.c1, vs.ratio);
        fit.c2 = std::max(fit.c2, vs.ratio);
        fit.samples.push_back(std::move(vs));
    }
    fit.feasible = fit.c1 > 0 && std::isfinite(fit.c2);
    return fit;
}

DoublingResult doubling_constant(const DomainSpec& dom, const WeightParams& w,
                                 const std::vector<std::pair<Vec, double>>& samples,
                                 double quad_tol) {
    if (samples.empty()) throw std::invalid_argument("empty sample set");
    DoublingResult out;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& [x, r] = samples[i];
        const BallSpec b1 = make_ball(dom, x, r);
        const BallSpec b2 = make_ball(dom, x, 2 * r);
        const double v1 = weighted_volume(dom, w, b1, quad_tol);
        const double v2 = weighted_volume(dom, w, b2, quad_tol);
        const double q = v2 / v1;
        out.ratios.push_back(q);
        if (q > out.C_D) {
            out.C_D = q;
            out.argmax = i;
        }
    }
    return out;
}

CondReport check_condition_cond(const DomainSpec& dom, int n_samples, double tol) {
    if (dom.dim < 3) throw std::invalid_argument("condition check requires N >= 3");
    CondReport rep;
    rep.min_value = std::numeric_limits<double>::max();
    Halton seq(dom.dim);
    const Vec blo = dom.bbox_lo(), bhi = dom.bbox_hi();
    const double fd = 1e-4 * dom.inradius();
    const double n2 = 2.0 - dom.dim;
    while (rep.evaluated < n_samples) {
        const Vec u = seq.next();
        Vec x = blo + u.cwiseProduct(bhi - blo);
        if (!contains(dom, x)) continue;
        const double d = distance(dom, x);
        const double nx = x.norm();
        if (d < 0.05 * dom.inradius() || nx < 0.1 * dom.inradius()) continue;
        // -div(|x|^{2-N} grad d) by central differences of the flux field
        double div = 0.0;
        bool ok = true;
        for (int k = 0; k < dom.dim && ok; ++k) {
            for (int side = -1; side <= 1 && ok; side += 2) {
                Vec xp = x;
                xp[k] += side * fd;
                try {
                    const auto dc = distance_calculus(dom, xp);
                    const double flux = std::pow(xp.norm(), n2) * dc.grad[k];
                    div += side * flux / (2 * fd);
                } catch (const std::domain_error&) {
                    ok = false;
                }
            }
        }
        if (!ok) {
            ++rep.skipped;
            continue;
        }
        const double value = -div;
        rep.values.emplace_back(x, value);
        if (value < rep.min_value) {
            rep.min_value = value;
            rep.arg_min = x;
        }
        ++rep.evaluated;
    }
    rep.holds = rep.min_value >= -tol;
    return rep;
}

}  // namespace hklab
