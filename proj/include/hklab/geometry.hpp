#ifndef HKLAB_GEOMETRY_HPP
#define HKLAB_GEOMETRY_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

#include "hklab/util.hpp"

namespace hklab {

enum class DomainKind { ball, box, polygon, ellipse };

struct DomainSpec {
    DomainKind kind = DomainKind::ball;
    int dim = 1;
    double radius = 0.0;                     // ball
    Vec lo, hi;                              // box
    std::vector<Eigen::Vector2d> vertices;   // convex polygon, counter-clockwise
    double semi_a = 0.0, semi_b = 0.0;       // ellipse semi-axes

    bool convex() const;
    double inradius() const;
    // Chart scale beta; admissible ball radii are r < beta.
    double chart_scale() const { return 0.25 * inradius(); }
    Vec bbox_lo() const;
    Vec bbox_hi() const;
    std::string describe() const;

    static DomainSpec ball_domain(int dim, double R);
    static DomainSpec box_domain(const Vec& lo, const Vec& hi);
    static DomainSpec unit_box(int dim);
    static DomainSpec polygon_domain(std::vector<Eigen::Vector2d> verts);
    static DomainSpec ellipse_domain(double a, double b);
};

// Membership in the closed domain.
bool contains(const DomainSpec& dom, const Vec& x);

// Exact Euclidean distance to the boundary; throws std::domain_error outside the closure.
double distance(const DomainSpec& dom, const Vec& x);

// Nearest boundary point (unique off the ridge set for the implemented shapes).
Vec nearest_boundary_point(const DomainSpec& dom, const Vec& x);

struct DistanceCalculus {
    Vec grad;     // unit inward-pointing gradient of d
    double lap;   // Laplacian of d
};

// Closed forms for ball/box/ellipse, finite differences for polygons.
// Throws std::domain_error at ridge points / the ball center.
DistanceCalculus distance_calculus(const DomainSpec& dom, const Vec& x);

struct WeightParams {
    double lambda = 0.0;  // origin exponent, lambda <= 0, lambda > -N
    double alpha = 0.0;   // boundary exponent, alpha >= 0
};

// |x|^lambda d^alpha(x), with d taken as 0 outside the domain and the
// convention t^0 = 1 even at t = 0 (so alpha = 0 weights never vanish).
double weight_value(const DomainSpec& dom, const WeightParams& w, const Vec& x);

enum class BallKind { euclidean, boundary_adapted };

struct BallSpec {
    Vec center;
    double r = 0.0;
    double gamma = 1.5;
    BallKind kind = BallKind::euclidean;
    double center_dist = 0.0;  // d(center), cached

    // Chart data for the boundary-adapted kind.
    Vec boundary_point;            // projection of the center onto the boundary
    Eigen::MatrixXd tangent;       // (N-1) x N tangent frame rows
    Vec outward_normal;            // unit outward normal at boundary_point
    bool flat_chart = false;       // flat face (box/polygon) vs curved (ball/ellipse)

    bool member(const DomainSpec& dom, const Vec& y) const;
    // Axis-aligned bounding box enclosing the set (conservative for adapted kind).
    void bounding_box(Vec& lo, Vec& hi) const;
};

// gamma in (1,2); throws std::invalid_argument when r >= chart scale.
BallSpec make_ball(const DomainSpec& dom, const Vec& x, double r, double gamma = 1.5);

// Quadrature of the weighted volume V(x,r) = int_{B cap Omega} |y|^lambda d^alpha dy.
// Midpoint tensor rule refined until successive levels agree to rel_tol.
double weighted_volume(const DomainSpec& dom, const WeightParams& w, const BallSpec& ball,
                       double rel_tol = 0.01, int max_level = 5);

struct VolumeSample {
    Vec x;
    double r;
    double volume;  // filled by the fit
    double shape;
    double ratio;
};

struct VolumeFit {
    double c1 = 0.0, c2 = 0.0;
    bool feasible = false;
    std::vector<VolumeSample> samples;
    double ratio() const { return c2 / c1; }
};

// Two-sided fit of V(x,r) against max{d^alpha(x)(|x|+r)^lambda, r^alpha} r^N.
VolumeFit volume_envelope_fit(const DomainSpec& dom, const WeightParams& w,
                              const std::vector<std::pair<Vec, double>>& samples,
                              double quad_tol = 0.01);

struct DoublingResult {
    double C_D = 0.0;
    std::size_t argmax = 0;
    std::vector<double> ratios;
};

DoublingResult doubling_constant(const DomainSpec& dom, const WeightParams& w,
                                 const std::vector<std::pair<Vec, double>>& samples,
                                 double quad_tol = 0.01);

struct CondReport {
    bool holds = false;
    double min_value = 0.0;
    Vec arg_min;
    int evaluated = 0;
    int skipped = 0;
    std::vector<std::pair<Vec, double>> values;
};

// Evaluates -div(|x|^{2-N} grad d) on interior sample points by finite differences.
CondReport check_condition_cond(const DomainSpec& dom, int n_samples, double tol = 1e-6);

}  // namespace hklab

#endif
