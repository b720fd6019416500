#include "tistop/chebyshev.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "tistop/errors.hpp"

namespace tistop::cheb {

namespace {

// Barycentric weights of the Lobatto points cos(pi j / N), j = 0..N.
double bary_weight(std::size_t j, std::size_t N) {
    const double w = (j % 2 == 0) ? 1.0 : -1.0;
    return (j == 0 || j == N) ? 0.5 * w : w;
}

double bary(const std::vector<double>& nodes, const std::vector<double>& data, double t) {
    const std::size_t N = nodes.size() - 1;
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j <= N; ++j) {
        const double d = t - nodes[j];
        if (d == 0.0) return data[j];
        const double c = bary_weight(j, N) / d;
        num += c * data[j];
        den += c;
    }
    return num / den;
}

// Differentiation matrix on the reference Lobatto points.
Eigen::MatrixXd diff_matrix(std::size_t N) {
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(N + 1, N + 1);
    const double n = static_cast<double>(N);
    for (std::size_t i = 0; i <= N; ++i) {
        const double ci = (i == 0 || i == N) ? 2.0 : 1.0;
        double rowsum = 0.0;
        for (std::size_t j = 0; j <= N; ++j) {
            if (i == j) continue;
            const double cj = (j == 0 || j == N) ? 2.0 : 1.0;
            const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            const double diff = 2.0 * std::sin(M_PI * static_cast<double>(i + j) / (2.0 * n)) *
                                std::sin(M_PI * (static_cast<double>(j) - static_cast<double>(i)) / (2.0 * n));
            D(i, j) = ci / cj * sign / diff;
            rowsum += D(i, j);
        }
        D(i, i) = -rowsum;
    }
    return D;
}

struct Attempt {
    Solution sol;
    double residual;
};

Attempt attempt(const OdeCoefficients& ode, double lo, double hi, BoundaryCondition left, BoundaryCondition right,
                std::size_t N) {
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    std::vector<double> t(N + 1), y(N + 1);
    for (std::size_t j = 0; j <= N; ++j) {
        t[j] = std::cos(M_PI * static_cast<double>(j) / static_cast<double>(N));
        y[j] = mid + half * t[j];
    }
    const Eigen::MatrixXd D = diff_matrix(N) / half;
    const Eigen::MatrixXd D2 = D * D;
    Eigen::MatrixXd A(N + 1, N + 1);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(N + 1);
    for (std::size_t i = 0; i <= N; ++i) {
        const Coefficients c = ode(y[i]);
        A.row(i) = c.a2 * D2.row(i) + c.a1 * D.row(i);
        A(i, i) += c.a0;
    }
    // Node 0 is the right end (t = 1), node N the left end.
    auto impose = [&](std::size_t i, BoundaryCondition bc) {
        if (bc.kind == BoundaryCondition::Dirichlet) {
            A.row(i).setZero();
            A(i, i) = 1.0;
            b(i) = bc.value;
        } else {
            A.row(i) = D.row(i);
            A(i, i) -= bc.value;
            b(i) = 0.0;
        }
    };
    impose(0, right);
    impose(N, left);
    for (std::size_t i = 0; i <= N; ++i) {
        const double s = A.row(i).cwiseAbs().maxCoeff();
        if (s > 0.0) {
            A.row(i) /= s;
            b(i) /= s;
        }
    }
    const Eigen::VectorXd u = A.partialPivLu().solve(b);
    const Eigen::VectorXd du = D * u;
    const Eigen::VectorXd d2u = D * du;

    std::vector<double> uv(u.data(), u.data() + N + 1), duv(du.data(), du.data() + N + 1),
        d2v(d2u.data(), d2u.data() + N + 1);
    double worst = 0.0, scale = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
        const double tm = std::cos(M_PI * (static_cast<double>(j) + 0.5) / static_cast<double>(N));
        const double ym = mid + half * tm;
        const Coefficients c = ode(ym);
        const double u0 = bary(t, uv, tm), u1 = bary(t, duv, tm), u2 = bary(t, d2v, tm);
        const double terms = std::fabs(c.a2 * u2) + std::fabs(c.a1 * u1) + std::fabs(c.a0 * u0);
        worst = std::max(worst, std::fabs(c.a2 * u2 + c.a1 * u1 + c.a0 * u0));
        scale = std::max(scale, terms);
    }
    const double rel = scale > 0.0 ? worst / scale : 0.0;
    return {Solution(lo, hi, std::move(y), std::move(uv), std::move(duv), rel), rel};
}

}  // namespace

Solution::Solution(double lo, double hi, std::vector<double> y, std::vector<double> u, std::vector<double> du,
                   double residual)
    : lo_(lo), hi_(hi), y_(std::move(y)), u_(std::move(u)), du_(std::move(du)), residual_(residual) {
    const std::size_t N = y_.size() - 1;
    t_.resize(N + 1);
    for (std::size_t j = 0; j <= N; ++j) t_[j] = std::cos(M_PI * static_cast<double>(j) / static_cast<double>(N));
}

double Solution::interpolate(const std::vector<double>& data, double y) const {
    const double half = 0.5 * (hi_ - lo_), mid = 0.5 * (hi_ + lo_);
    return bary(t_, data, (y - mid) / half);
}

Solution solve(const OdeCoefficients& ode, double lo, double hi, BoundaryCondition left, BoundaryCondition right,
               const BvpOptions& opts) {
    if (!(hi > lo)) throw DomainError("collocation interval is empty");
    double last = 0.0;
    for (std::size_t N = opts.nodes; N <= opts.max_nodes; N *= 2) {
        Attempt a = attempt(ode, lo, hi, left, right, N);
        if (a.residual <= opts.tol) return std::move(a.sol);
        last = a.residual;
    }
    std::ostringstream os;
    os << "collocation residual " << last << " above tolerance " << opts.tol << " at " << opts.max_nodes << " nodes";
    throw SolverError(os.str(), last);
}

}  // namespace tistop::cheb
