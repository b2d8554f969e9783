#ifndef SFADE_SOLVER_HPP
#define SFADE_SOLVER_HPP

// Ties problem data, collocation operators and the time integrator together:
// semidiscretize in space, integrate the coefficient ODEs, expose the
// continuous solution u(x,t) and the sampled error metrics.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sfade/odeint.hpp"
#include "sfade/operators.hpp"

namespace sfade {

using SpaceTimeFn = std::function<double(double, double)>;
using SpaceFn = std::function<double(double)>;

/// One two-sided space-fractional advection-diffusion problem on
/// [0, ell] x [0, horizon] with homogeneous Dirichlet data.
struct ProblemSpec {
    double alpha;   // advection order, in (0,1)
    double beta;    // diffusion order, in (1,2]
    double ell;     // domain length
    double horizon; // final time T
    SpaceTimeFn c_alpha_plus, c_alpha_minus; // advection coefficients, >= 0
    SpaceTimeFn c_beta_plus, c_beta_minus;   // diffusion coefficients, >= 0
    SpaceTimeFn source;
    SpaceFn initial;
    SpaceTimeFn exact; // null when unknown

    // set by constructors that know better; both default to the safe choice
    bool coefficients_time_dependent = true;
    bool source_is_zero = false;

    bool has_exact() const { return static_cast<bool>(exact); }
};

/// Sample the coefficient functions and initial data; returns human-readable
/// warnings (negativity, incompatible boundary data). Never throws on
/// questionable data, only on evaluation failure.
inline std::vector<std::string> validate_problem(const ProblemSpec& spec) {
    std::vector<std::string> warnings;
    const int nx = 33, nt = 9;
    bool negative = false;
    for (int i = 1; i < nx && !negative; ++i) {
        const double x = spec.ell * i / nx;
        for (int j = 0; j <= nt; ++j) {
            const double t = spec.horizon * j / nt;
            if (spec.c_alpha_plus(x, t) < 0.0 || spec.c_alpha_minus(x, t) < 0.0 ||
                spec.c_beta_plus(x, t) < 0.0 || spec.c_beta_minus(x, t) < 0.0) {
                negative = true;
                break;
            }
        }
    }
    if (negative)
        warnings.push_back("coefficient functions take negative values on the sampled grid");
    if (std::fabs(spec.initial(0.0)) > 1.0e-12 || std::fabs(spec.initial(spec.ell)) > 1.0e-12)
        warnings.push_back("incompatible boundary data: initial condition does not vanish at the endpoints");
    return warnings;
}

/// Space-discretized problem: the explicit coefficient IVP plus everything
/// needed to interpret its solution.
struct SemidiscreteSystem {
    BasisSpec basis;
    CollocationGrid grid;
    FractionalOperatorSet ops;
    bool frozen;               // spatial operator precombined (time-independent coefficients)
    Eigen::MatrixXd frozen_op; // M^{-1} [ -C+a D+a - C-a D-a + C+b D+b + C-b D-b ]
    IvpProblem ivp;
};

/// Collocate in space: a' = M^{-1}[ -C_a^+ D_a^+ - C_a^- D_a^- + C_b^+ D_b^+
/// + C_b^- D_b^- ] a + M^{-1} s(t), with a(0) = M^{-1} F.
inline SemidiscreteSystem semidiscretize(const ProblemSpec& spec, int n) {
    if (n < 1) throw std::invalid_argument("semidiscretize: require n >= 1");
    BasisSpec basis(spec.ell, n);
    CollocationGrid grid = build_grid(spec.ell, n);
    FractionalOperatorSet ops = build_fractional_matrices(grid, basis, spec.alpha, spec.beta);

    const int dim = n + 1;
    const Eigen::VectorXd nodes = grid.nodes;
    Eigen::VectorXd F = initial_projection_rhs(basis, spec.initial, nodes);
    if (!F.allFinite()) throw std::runtime_error("semidiscretize: non-finite initial data");
    Eigen::VectorXd a0 = ops.mass_inv * F;

    SemidiscreteSystem sys{std::move(basis), std::move(grid), std::move(ops),
                           false, Eigen::MatrixXd(), IvpProblem{}};

    auto eval_coeff_diag = [nodes](const SpaceTimeFn& c, double t, Eigen::VectorXd& out) {
        for (Eigen::Index i = 0; i < nodes.size(); ++i) out[i] = c(nodes[i], t);
    };

    if (!spec.coefficients_time_dependent) {
        Eigen::VectorXd cap(dim), cam(dim), cbp(dim), cbm(dim);
        eval_coeff_diag(spec.c_alpha_plus, 0.0, cap);
        eval_coeff_diag(spec.c_alpha_minus, 0.0, cam);
        eval_coeff_diag(spec.c_beta_plus, 0.0, cbp);
        eval_coeff_diag(spec.c_beta_minus, 0.0, cbm);
        Eigen::MatrixXd combo = -(cap.asDiagonal() * sys.ops.d_alpha_left) -
                                (cam.asDiagonal() * sys.ops.d_alpha_right) +
                                (cbp.asDiagonal() * sys.ops.d_beta_left) +
                                (cbm.asDiagonal() * sys.ops.d_beta_right);
        sys.frozen_op = sys.ops.mass_inv * combo;
        if (!sys.frozen_op.allFinite())
            throw std::runtime_error("semidiscretize: non-finite coefficient data");
        sys.frozen = true;
    }

    // rhs closures capture shared matrices by value (Eigen shares storage on copy
    // only via when captured; capture what we need explicitly)
    const Eigen::MatrixXd mass_inv = sys.ops.mass_inv;
    if (sys.frozen) {
        const Eigen::MatrixXd Q = sys.frozen_op;
        if (spec.source_is_zero) {
            sys.ivp.rhs = [Q](double, const Eigen::VectorXd& a, Eigen::VectorXd& da) {
                da.noalias() = Q * a;
            };
        } else {
            const SpaceTimeFn src = spec.source;
            sys.ivp.rhs = [Q, mass_inv, nodes, src, s = Eigen::VectorXd(dim)](
                              double t, const Eigen::VectorXd& a,
                              Eigen::VectorXd& da) mutable {
                for (Eigen::Index i = 0; i < nodes.size(); ++i) s[i] = src(nodes[i], t);
                da.noalias() = Q * a;
                da.noalias() += mass_inv * s;
            };
        }
    } else {
        const FractionalOperatorSet& ops_ref = sys.ops;
        const Eigen::MatrixXd dal = ops_ref.d_alpha_left, dar = ops_ref.d_alpha_right,
                              dbl_ = ops_ref.d_beta_left, dbr = ops_ref.d_beta_right;
        const SpaceTimeFn cap = spec.c_alpha_plus, cam = spec.c_alpha_minus,
                          cbp = spec.c_beta_plus, cbm = spec.c_beta_minus;
        const SpaceTimeFn src = spec.source;
        const bool src_zero = spec.source_is_zero;
        sys.ivp.rhs = [=, v = Eigen::VectorXd(dim), w = Eigen::VectorXd(dim)](
                          double t, const Eigen::VectorXd& a, Eigen::VectorXd& da) mutable {
            v.noalias() = dal * a;
            for (Eigen::Index i = 0; i < nodes.size(); ++i) v[i] *= -cap(nodes[i], t);
            w.noalias() = dar * a;
            for (Eigen::Index i = 0; i < nodes.size(); ++i) v[i] -= cam(nodes[i], t) * w[i];
            w.noalias() = dbl_ * a;
            for (Eigen::Index i = 0; i < nodes.size(); ++i) v[i] += cbp(nodes[i], t) * w[i];
            w.noalias() = dbr * a;
            for (Eigen::Index i = 0; i < nodes.size(); ++i) v[i] += cbm(nodes[i], t) * w[i];
            if (!src_zero)
                for (Eigen::Index i = 0; i < nodes.size(); ++i) v[i] += src(nodes[i], t);
            da.noalias() = mass_inv * v;
        };
    }
    sys.ivp.dimension = dim;
    sys.ivp.t0 = 0.0;
    sys.ivp.t_end = spec.horizon;
    sys.ivp.y0 = std::move(a0);
    return sys;
}

namespace detail {

// Beyond this dimension the coefficient trajectory is stored only at the
// metric/snapshot times; full dense output over ~1e5-1e6 accepted steps
// would need gigabytes.
inline constexpr int dense_storage_max_dim = 64;

inline std::vector<double> metric_times(double horizon) {
    std::vector<double> ts(101);
    for (int j = 0; j <= 100; ++j) ts[j] = horizon * j / 100.0;
    return ts;
}

} // namespace detail

/// Continuous-in-space solution of a solved problem.
class SpectralSolution {
public:
    ProblemSpec spec;
    int n = 0;
    BasisSpec basis{1.0, 0};
    CollocationGrid grid;
    StepStats stats;
    std::vector<std::string> warnings;

    bool dense_mode = true;
    IvpSolution dense;          // used when dense_mode
    SampledIvpSolution sampled; // used otherwise

    /// Coefficient vector a(t). Dense runs interpolate anywhere in [0, T];
    /// sampled runs require t to be one of the recorded times.
    Eigen::VectorXd coefficients_at(double t) const {
        if (dense_mode) return dense.sample(t);
        const auto& ts = sampled.sample_times;
        const double tolr = 1.0e-9 * (spec.horizon + 1.0);
        auto it = std::lower_bound(ts.begin(), ts.end(), t - tolr);
        if (it == ts.end() || std::fabs(*it - t) > tolr)
            throw std::invalid_argument(
                "SpectralSolution: time not among stored samples for this large-n run");
        return sampled.samples.col(static_cast<Eigen::Index>(it - ts.begin()));
    }

    /// u(x,t) = sum_k a_k(t) phi_k(x); exactly zero at x = 0 and x = ell.
    double evaluate(double x, double t) const {
        Eigen::VectorXd a = coefficients_at(t);
        Eigen::VectorXd ph(n + 1);
        phi_all(basis, x, ph);
        return ph.dot(a);
    }
};

/// Solve the problem with n+1 basis functions. extra_times lists additional
/// report times that must be recorded exactly (snapshots).
inline SpectralSolution solve(const ProblemSpec& spec, int n, const TolSettings& tol = {},
                              const std::vector<double>& extra_times = {}) {
    SemidiscreteSystem sys = semidiscretize(spec, n);
    SpectralSolution sol;
    sol.spec = spec;
    sol.n = n;
    sol.basis = sys.basis;
    sol.grid = sys.grid;
    sol.warnings = validate_problem(spec);
    try {
        if (n + 1 <= detail::dense_storage_max_dim) {
            sol.dense_mode = true;
            sol.dense = solve_ivp(sys.ivp, tol);
            sol.stats = sol.dense.stats;
        } else {
            sol.dense_mode = false;
            std::vector<double> times = detail::metric_times(spec.horizon);
            times.insert(times.end(), extra_times.begin(), extra_times.end());
            std::sort(times.begin(), times.end());
            times.erase(std::unique(times.begin(), times.end()), times.end());
            sol.sampled = solve_ivp_sampled(sys.ivp, tol, std::move(times));
            sol.stats = sol.sampled.stats;
        }
    } catch (const std::exception& e) {
        throw std::runtime_error("solve failed (n=" + std::to_string(n) +
                                 ", alpha=" + std::to_string(spec.alpha) +
                                 ", beta=" + std::to_string(spec.beta) + "): " + e.what());
    }
    return sol;
}

struct ErrorMetrics {
    double e2;
    double einf;
};

/// The sampled l2/linf errors over the collocation nodes and the 101 uniform
/// report times j*T/100:
///   E2   = sqrt( (1/(100 n)) sum_i sum_j (u - u_n)^2 ),
///   Einf = max |u - u_n|.
inline ErrorMetrics error_metrics(const SpectralSolution& sol) {
    if (!sol.spec.has_exact())
        throw std::invalid_argument("error_metrics: problem has no exact solution");
    const int n = sol.n;
    const double T = sol.spec.horizon;
    Eigen::MatrixXd phis(n + 1, n + 1); // row i = phi_*(node_i)
    Eigen::VectorXd row(n + 1);
    for (int i = 0; i <= n; ++i) {
        phi_all(sol.basis, sol.grid.nodes[i], row);
        phis.row(i) = row;
    }
    double sum = 0.0, peak = 0.0;
    for (int j = 0; j <= 100; ++j) {
        const double t = T * j / 100.0;
        Eigen::VectorXd a = sol.coefficients_at(t);
        Eigen::VectorXd un = phis * a;
        for (int i = 0; i <= n; ++i) {
            const double diff = sol.spec.exact(sol.grid.nodes[i], t) - un[i];
            sum += diff * diff;
            peak = std::max(peak, std::fabs(diff));
        }
    }
    return ErrorMetrics{std::sqrt(sum / (100.0 * n)), peak};
}

/// Free-function form of SpectralSolution::evaluate.
inline double evaluate(const SpectralSolution& sol, double x, double t) {
    return sol.evaluate(x, t);
}

} // namespace sfade

#endif
