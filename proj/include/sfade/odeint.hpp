#ifndef SFADE_ODEINT_HPP
#define SFADE_ODEINT_HPP

// Adaptive explicit Dormand-Prince 5(4) integrator with FSAL, PI step-size
// control and 4th-order dense output.
//
// Two driver entry points share the stepping core:
//   solve_ivp         -- retains every accepted step plus dense-output
//                        coefficients (memory ~ steps * 7 * dimension)
//   solve_ivp_sampled -- records the solution only at caller-given times;
//                        memory is independent of the step count, which
//                        matters for stiff runs with ~1e5-1e6 steps.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace sfade {

using RhsFunction = std::function<void(double, const Eigen::VectorXd&, Eigen::VectorXd&)>;

struct IvpProblem {
    int dimension;
    RhsFunction rhs;
    double t0;
    double t_end;
    Eigen::VectorXd y0;
};

struct TolSettings {
    double abs_tol = 1.0e-14;
    double rel_tol = 1.0e-12;
    long max_steps = 10'000'000;
    double initial_step = 0.0; // 0 = automatic
};

struct StepStats {
    long accepted = 0;
    long rejected = 0;
    long rhs_evals = 0;
};

class StepUnderflowError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class MaxStepsExceededError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace dp5 {

// Dormand-Prince 5(4) tableau
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// difference between 5th- and embedded 4th-order weights
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// dense-output weights
inline constexpr double d1 = -12715105075.0 / 11282082432.0;
inline constexpr double d3 = 87487479700.0 / 32700410799.0;
inline constexpr double d4 = -10690763975.0 / 1880347072.0;
inline constexpr double d5 = 701980252875.0 / 199316789632.0;
inline constexpr double d6 = -1453857185.0 / 822651844.0;
inline constexpr double d7 = 69997945.0 / 29380423.0;

// interpolation coefficients over one accepted step
using DenseCoeffs = std::array<Eigen::VectorXd, 5>;

inline DenseCoeffs make_dense_coeffs(double h, const Eigen::VectorXd& y_old,
                                     const Eigen::VectorXd& y_new,
                                     const std::array<Eigen::VectorXd, 7>& k) {
    DenseCoeffs c;
    Eigen::VectorXd dy = y_new - y_old;
    c[0] = y_old;
    c[1] = dy;
    c[2] = h * k[0] - dy;
    c[3] = dy - h * k[6] - c[2];
    c[4] = h * (d1 * k[0] + d3 * k[2] + d4 * k[3] + d5 * k[4] + d6 * k[5] + d7 * k[6]);
    return c;
}

inline void dense_eval(const DenseCoeffs& c, double theta, Eigen::VectorXd& out) {
    const double t1 = 1.0 - theta;
    out = c[0] + theta * (c[1] + t1 * (c[2] + theta * (c[3] + t1 * c[4])));
}

} // namespace dp5

namespace detail {

struct StepRecord {
    double t_old;
    double h;
    const Eigen::VectorXd& y_old;
    const Eigen::VectorXd& y_new;
    const std::array<Eigen::VectorXd, 7>& k;
};

// One FSAL-aware adaptive integration; Sink::on_step is called per accepted
// step in time order.
template <class Sink>
StepStats integrate_dp5(const IvpProblem& prob, const TolSettings& tol, Sink& sink) {
    using Eigen::VectorXd;
    namespace T = dp5;

    if (!(prob.t_end > prob.t0))
        throw std::invalid_argument("solve_ivp: require t_end > t0");
    if (!(tol.abs_tol > 0.0) || !(tol.rel_tol > 0.0))
        throw std::invalid_argument("solve_ivp: tolerances must be positive");
    const int nd = prob.dimension;
    if (prob.y0.size() != nd)
        throw std::invalid_argument("solve_ivp: initial state dimension mismatch");

    const double span = prob.t_end - prob.t0;
    const double hmax = span;
    const double hmin = 1.0e-14 * span;

    StepStats stats;
    VectorXd y = prob.y0;
    std::array<VectorXd, 7> k;
    for (auto& v : k) v.resize(nd);
    VectorXd ytmp(nd), ynew(nd), err(nd);

    double t = prob.t0;
    prob.rhs(t, y, k[0]);
    ++stats.rhs_evals;
    if (!k[0].allFinite()) throw std::runtime_error("solve_ivp: non-finite rhs output");

    auto scaled_rms = [&](const VectorXd& v, const VectorXd& ya, const VectorXd& yb) {
        double s = 0.0;
        for (int i = 0; i < nd; ++i) {
            const double sc =
                tol.abs_tol + tol.rel_tol * std::max(std::fabs(ya[i]), std::fabs(yb[i]));
            const double q = v[i] / sc;
            s += q * q;
        }
        return std::sqrt(s / nd);
    };

    // automatic initial step (order-5 heuristic)
    double h = tol.initial_step;
    if (h <= 0.0) {
        double dnf = 0.0, dny = 0.0;
        for (int i = 0; i < nd; ++i) {
            const double sc = tol.abs_tol + tol.rel_tol * std::fabs(y[i]);
            dnf += (k[0][i] / sc) * (k[0][i] / sc);
            dny += (y[i] / sc) * (y[i] / sc);
        }
        double h0 =
            (dnf <= 1.0e-10 || dny <= 1.0e-10) ? 1.0e-6 : 0.01 * std::sqrt(dny / dnf);
        h0 = std::min(h0, hmax);
        ytmp = y + h0 * k[0];
        prob.rhs(t + h0, ytmp, k[1]);
        ++stats.rhs_evals;
        double der2 = 0.0;
        for (int i = 0; i < nd; ++i) {
            const double sc = tol.abs_tol + tol.rel_tol * std::fabs(y[i]);
            const double q = (k[1][i] - k[0][i]) / sc;
            der2 += q * q;
        }
        der2 = std::sqrt(der2) / h0;
        const double der12 = std::max(der2, std::sqrt(dnf));
        const double h1 =
            (der12 <= 1.0e-15) ? std::max(1.0e-6, h0 * 1.0e-3) : std::pow(0.01 / der12, 0.2);
        h = std::min({100.0 * h0, h1, hmax});
    }

    // PI controller state
    constexpr double safety = 0.9, ctrl_beta = 0.04;
    constexpr double expo1 = 0.2 - ctrl_beta * 0.75;
    constexpr double fac_shrink = 0.2, fac_grow = 5.0;
    double facold = 1.0e-4;
    bool rejected_last = false;

    while (t < prob.t_end) {
        if (stats.accepted + stats.rejected >= tol.max_steps)
            throw MaxStepsExceededError("solve_ivp: max_steps exceeded at t = " +
                                        std::to_string(t));
        if (h < hmin)
            throw StepUnderflowError("solve_ivp: step underflow at t = " + std::to_string(t));
        bool last = false;
        if (t + h >= prob.t_end) {
            h = prob.t_end - t;
            last = true;
        }

        ytmp.noalias() = y + (h * T::a21) * k[0];
        prob.rhs(t + T::c2 * h, ytmp, k[1]);
        ytmp.noalias() = y + h * (T::a31 * k[0] + T::a32 * k[1]);
        prob.rhs(t + T::c3 * h, ytmp, k[2]);
        ytmp.noalias() = y + h * (T::a41 * k[0] + T::a42 * k[1] + T::a43 * k[2]);
        prob.rhs(t + T::c4 * h, ytmp, k[3]);
        ytmp.noalias() = y + h * (T::a51 * k[0] + T::a52 * k[1] + T::a53 * k[2] + T::a54 * k[3]);
        prob.rhs(t + T::c5 * h, ytmp, k[4]);
        ytmp.noalias() =
            y + h * (T::a61 * k[0] + T::a62 * k[1] + T::a63 * k[2] + T::a64 * k[3] +
                     T::a65 * k[4]);
        prob.rhs(t + h, ytmp, k[5]);
        ynew.noalias() =
            y + h * (T::b1 * k[0] + T::b3 * k[2] + T::b4 * k[3] + T::b5 * k[4] + T::b6 * k[5]);
        prob.rhs(t + h, ynew, k[6]); // FSAL stage
        stats.rhs_evals += 6;

        err.noalias() = h * (T::e1 * k[0] + T::e3 * k[2] + T::e4 * k[3] + T::e5 * k[4] +
                             T::e6 * k[5] + T::e7 * k[6]);
        if (!ynew.allFinite() || !err.allFinite())
            throw std::runtime_error("solve_ivp: non-finite rhs output at t = " +
                                     std::to_string(t));
        const double err_norm = scaled_rms(err, y, ynew);

        const double fac11 = std::pow(err_norm, expo1);
        if (err_norm <= 1.0) {
            facold = std::max(err_norm, 1.0e-4);
            sink.on_step(detail::StepRecord{t, h, y, ynew, k});
            ++stats.accepted;
            t += h;
            std::swap(k[0], k[6]);
            y.swap(ynew);
            double fac = fac11 / std::pow(facold, ctrl_beta);
            fac = std::max(1.0 / fac_grow, std::min(1.0 / fac_shrink, fac / safety));
            double hnew = h / fac;
            if (rejected_last) hnew = std::min(hnew, h);
            rejected_last = false;
            h = std::min(hnew, hmax);
            if (last && t >= prob.t_end) break;
        } else {
            ++stats.rejected;
            rejected_last = true;
            h = h / std::min(1.0 / fac_shrink, fac11 / safety);
        }
    }
    return stats;
}

} // namespace detail

/// Trajectory with dense output over every accepted step.
class IvpSolution {
public:
    std::vector<double> times;            // accepted step times, t0 ... t_end
    std::vector<Eigen::VectorXd> states;  // states at those times
    StepStats stats;

    /// Dense-output interpolation, 4th-order accurate inside each step.
    Eigen::VectorXd sample(double t) const {
        if (times.empty()) throw std::logic_error("IvpSolution: empty");
        const double t0 = times.front(), t1 = times.back();
        const double slack = 1.0e-12 * (t1 - t0 + 1.0);
        if (t < t0 - slack || t > t1 + slack)
            throw std::domain_error("IvpSolution::sample: time out of range");
        t = std::clamp(t, t0, t1);
        // interval index: times[i] <= t <= times[i+1]
        auto it = std::upper_bound(times.begin(), times.end(), t);
        std::size_t i = (it == times.begin()) ? 0 : (it - times.begin() - 1);
        if (i >= dense_.size()) i = dense_.size() - 1;
        const double h = times[i + 1] - times[i];
        const double theta = (t - times[i]) / h;
        Eigen::VectorXd out;
        dp5::dense_eval(dense_[i], theta, out);
        return out;
    }

    void push_step(const detail::StepRecord& rec) {
        if (times.empty()) {
            times.push_back(rec.t_old);
            states.push_back(rec.y_old);
        }
        times.push_back(rec.t_old + rec.h);
        states.push_back(rec.y_new);
        dense_.push_back(dp5::make_dense_coeffs(rec.h, rec.y_old, rec.y_new, rec.k));
    }

private:
    std::vector<dp5::DenseCoeffs> dense_;
};

/// Solution recorded only at preselected times.
struct SampledIvpSolution {
    std::vector<double> sample_times;
    Eigen::MatrixXd samples; // column j = state at sample_times[j]
    Eigen::VectorXd final_state;
    StepStats stats;
};

/// Integrate and keep the full adaptive trajectory with dense output.
inline IvpSolution solve_ivp(const IvpProblem& prob, const TolSettings& tol = {}) {
    IvpSolution sol;
    struct Sink {
        IvpSolution* s;
        void on_step(const detail::StepRecord& rec) { s->push_step(rec); }
    } sink{&sol};
    sol.stats = detail::integrate_dp5(prob, tol, sink);
    return sol;
}

/// Dense-output sample of a stored solution (free-function form).
inline Eigen::VectorXd sample(const IvpSolution& sol, double t) { return sol.sample(t); }

/// Integrate, recording states only at the given sorted times in [t0, t_end].
/// Step data is discarded as integration proceeds.
inline SampledIvpSolution solve_ivp_sampled(const IvpProblem& prob,
                                            const TolSettings& tol,
                                            std::vector<double> times) {
    std::sort(times.begin(), times.end());
    for (double t : times)
        if (t < prob.t0 - 1e-12 || t > prob.t_end + 1e-12)
            throw std::domain_error("solve_ivp_sampled: sample time out of range");

    SampledIvpSolution out;
    out.sample_times = times;
    out.samples.resize(prob.dimension, static_cast<Eigen::Index>(times.size()));

    struct Sink {
        SampledIvpSolution* s;
        const std::vector<double>* times;
        std::size_t next = 0;
        Eigen::VectorXd tmp;

        void on_step(const detail::StepRecord& rec) {
            const double t1 = rec.t_old + rec.h;
            // emit all requested times inside (t_old, t1]; t == t0 handled below
            bool have_coeffs = false;
            dp5::DenseCoeffs coeffs;
            while (next < times->size() && (*times)[next] <= t1 + 1e-15 * std::fabs(t1)) {
                const double ts = (*times)[next];
                if (ts <= rec.t_old) {
                    s->samples.col(static_cast<Eigen::Index>(next)) = rec.y_old;
                } else if (ts >= t1) {
                    s->samples.col(static_cast<Eigen::Index>(next)) = rec.y_new;
                } else {
                    if (!have_coeffs) {
                        coeffs = dp5::make_dense_coeffs(rec.h, rec.y_old, rec.y_new, rec.k);
                        have_coeffs = true;
                    }
                    dp5::dense_eval(coeffs, (ts - rec.t_old) / rec.h, tmp);
                    s->samples.col(static_cast<Eigen::Index>(next)) = tmp;
                }
                ++next;
            }
            s->final_state = rec.y_new;
        }
    } sink{&out, &out.sample_times};

    out.stats = detail::integrate_dp5(prob, tol, sink);
    // any times exactly at t_end not yet emitted (floating slack)
    for (std::size_t j = sink.next; j < out.sample_times.size(); ++j)
        out.samples.col(static_cast<Eigen::Index>(j)) = out.final_state;
    return out;
}

} // namespace sfade

#endif
