#include "hklab/heat.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace hklab {

DtPolicy DtPolicy::for_range(double tmin, double tmax) {
    DtPolicy p;
    p.dt0 = tmin / 64.0;
    p.rho = 1.2;
    p.dt_max = tmax / 64.0;
    return p;
}

Evolver::Evolver(const WeightedOperator& op, EvolveOptions opts) : op_(op), opts_(opts) {
    if (opts_.theta < 0.5 || opts_.theta > 1.0)
        throw std::invalid_argument("theta must lie in [1/2, 1]");
}

SymSolver& Evolver::solver_for(double dt) {
    long long key;
    static_assert(sizeof(key) == sizeof(dt));
    std::memcpy(&key, &dt, sizeof(key));
    auto it = cache_.find(key);
    if (it != cache_.end()) return *it->second;
    SpMat S = opts_.theta * dt * op_.A;
    for (int i = 0; i < S.rows(); ++i) S.coeffRef(i, i) += op_.m[i];
    S.makeCompressed();
    auto solver = std::make_shared<SymSolver>(std::move(S), opts_.inner_tol, op_.grid->dim);
    auto [pos, inserted] = cache_.emplace(key, std::move(solver));
    return *pos->second;
}

void Evolver::run(const Vec& u0, const std::vector<double>& times,
                  const std::function<void(std::size_t, double, const Vec&)>& on_sample) {
    if (times.empty()) return;
    for (std::size_t j = 1; j < times.size(); ++j)
        if (times[j] <= times[j - 1]) throw std::invalid_argument("sample times must increase");
    if (times.front() <= 0) throw std::invalid_argument("sample times must be positive");
    Vec u = u0;
    double t = 0.0;
    long step = 0;
    for (std::size_t j = 0; j < times.size(); ++j) {
        const double target = times[j];
        while (t < target * (1 - 1e-14)) {
            double dt = std::min(opts_.policy.dt_max, opts_.policy.dt0 * std::pow(opts_.policy.rho,
                                                                                  double(step)));
            dt = std::min(dt, target - t);
            const Vec rhs = op_.m.cwiseProduct(u) - (1 - opts_.theta) * dt * (op_.A * u);
            u = solver_for(dt).solve_guess(rhs, u);
            t += dt;
            ++step;
        }
        on_sample(j, target, u);
    }
}

Vec evolve(const WeightedOperator& op, const Vec& u0, double t, const EvolveOptions& opts) {
    Vec out;
    Evolver ev(op, opts);
    ev.run(u0, {t}, [&](std::size_t, double, const Vec& u) { out = u; });
    return out;
}

KernelSlice kernel_column(const WeightedOperator& op, int y, std::vector<double> times,
                          EvolveOptions opts) {
    const Grid& g = *op.grid;
    if (y < 0 || y >= op.n()) throw std::invalid_argument("source node out of range");
    std::sort(times.begin(), times.end());
    const double floor = 4 * g.h * g.h;
    if (times.front() < floor * (1 - 1e-12))
        throw std::invalid_argument("requested time below the resolution floor 4 h^2");
    if (opts.policy.dt0 <= 0 || opts.policy.dt_max <= 0)
        opts.policy = DtPolicy::for_range(times.front(), times.back());

    Vec delta = Vec::Zero(op.n());
    delta[y] = 1.0 / op.m[y];

    KernelSlice slice;
    slice.source = y;
    slice.times = times;
    slice.theta_used = opts.theta;
    auto run_once = [&](double theta) {
        slice.values.assign(times.size(), Vec());
        slice.mass.assign(times.size(), 0.0);
        EvolveOptions o = opts;
        o.theta = theta;
        Evolver ev(op, o);
        ev.run(delta, times, [&](std::size_t j, double, const Vec& u) {
            slice.values[j] = u;
            slice.mass[j] = op.m.dot(u);
        });
    };
    run_once(opts.theta);
    double maxval = 0.0, minval = 0.0;
    for (const auto& v : slice.values) {
        maxval = std::max(maxval, v.maxCoeff());
        minval = std::min(minval, v.minCoeff());
    }
    if (minval < -1e-10 * std::max(maxval, 1e-300) && opts.theta != 1.0) {
        slice.undershoot_retry = true;
        slice.theta_used = 1.0;
        run_once(1.0);
    }
    return slice;
}

DenseOracle::DenseOracle(const WeightedOperator& op, int max_nodes) {
    if (op.n() > max_nodes)
        throw std::invalid_argument("dense oracle limited to " + std::to_string(max_nodes) + " nodes");
    msqrt_inv_ = op.m.cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd Asym = Eigen::MatrixXd(op.A);
    Asym = msqrt_inv_.asDiagonal() * Asym * msqrt_inv_.asDiagonal();
    Asym = 0.5 * (Asym + Asym.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Asym);
    if (es.info() != Eigen::Success) throw std::runtime_error("dense eigendecomposition failed");
    U_ = es.eigenvectors();
    evals_ = es.eigenvalues();
}

Eigen::MatrixXd DenseOracle::kernel(double t) const {
    const Vec e = (-t * evals_.array()).exp();
    Eigen::MatrixXd K = U_ * e.asDiagonal() * U_.transpose();
    K = msqrt_inv_.asDiagonal() * K * msqrt_inv_.asDiagonal();
    return K;
}

Vec DenseOracle::column(double t, int y) const {
    const Vec e = (-t * evals_.array()).exp();
    Vec col = U_ * e.cwiseProduct(U_.row(y).transpose() * msqrt_inv_[y]);
    return msqrt_inv_.cwiseProduct(col);
}

GreenVector green_function(const WeightedOperator& op, int y, double lambda1) {
    if (!(lambda1 > 0)) throw std::invalid_argument("green function needs lambda1 > 0");
    if (y < 0 || y >= op.n()) throw std::invalid_argument("source node out of range");
    Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(1e-12);
    cg.setMaxIterations(200000);
    cg.compute(op.A);
    Vec b = Vec::Zero(op.n());
    b[y] = 1.0;
    GreenVector gv;
    gv.source = y;
    gv.g = cg.solve(b);
    gv.residual = (op.A * gv.g - b).norm() / b.norm();
    if (gv.residual > 1e-10)
        throw std::runtime_error("green solve stagnated at residual " + std::to_string(gv.residual));
    return gv;
}

Vec green_by_time_integration(const DenseOracle& oracle, int y, double lambda1, double t0,
                              double t1, int steps) {
    // log-spaced trapezoid over [t0, t1] plus head l'(0,t0) by refined trapezoid
    // and tail k(t1) / lambda1
    Vec acc = Vec::Zero(oracle.column(t0, y).size());
    auto add_segment = [&](double a, double b, int m) {
        double prev_t = a;
        Vec prev = oracle.column(a, y);
        for (int i = 1; i <= m; ++i) {
            const double t = a * std::pow(b / a, double(i) / m);
            const Vec cur = oracle.column(t, y);
            acc += 0.5 * (t - prev_t) * (cur + prev);
            prev = cur;
            prev_t = t;
        }
    };
    add_segment(t0 * 1e-3, t0, steps);
    add_segment(t0, t1, steps);
    acc += oracle.column(t1, y) / lambda1;
    return acc;
}

}  // namespace hklab
