#include "symban/subspace.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "symban/errors.hpp"

namespace symban {

SubspaceModel::SubspaceModel(Partition partition)
    : partition_(std::move(partition)), k_(partition_.block_count()) {
    const int d = partition_.ground_set_size();
    block_index_.resize(static_cast<size_t>(d));
    block_sizes_.assign(static_cast<size_t>(k_), 0);
    for (int e = 1; e <= d; ++e) {
        const int b = partition_.block_of(e);
        block_index_[static_cast<size_t>(e - 1)] = b;
        ++block_sizes_[static_cast<size_t>(b)];
    }
}

Eigen::VectorXd SubspaceModel::expand(const Eigen::VectorXd& reduced) const {
    if (reduced.size() != k_) throw DimensionMismatch("expand: reduced length != k");
    Eigen::VectorXd theta(ambient_dim());
    for (int i = 0; i < ambient_dim(); ++i) theta[i] = reduced[block_index(i)];
    return theta;
}

Eigen::VectorXd project_point(const Eigen::VectorXd& x, const SubspaceModel& m) {
    if (x.size() != m.ambient_dim()) throw DimensionMismatch("project_point: length != d");
    Eigen::VectorXd sums = reduced_features(x, m);
    Eigen::VectorXd out(x.size());
    for (int i = 0; i < x.size(); ++i) {
        const int b = m.block_index(i);
        out[i] = sums[b] / m.block_sizes()[static_cast<size_t>(b)];
    }
    return out;
}

Eigen::VectorXd reduced_features(const Eigen::VectorXd& x, const SubspaceModel& m) {
    if (x.size() != m.ambient_dim())
        throw DimensionMismatch("reduced_features: length != d");
    Eigen::VectorXd sums = Eigen::VectorXd::Zero(m.k());
    for (int i = 0; i < x.size(); ++i) sums[m.block_index(i)] += x[i];
    return sums;
}

namespace {

Eigen::MatrixXd reduced_design(const Eigen::MatrixXd& X, const SubspaceModel& m) {
    Eigen::MatrixXd U = Eigen::MatrixXd::Zero(X.rows(), m.k());
    for (int i = 0; i < X.cols(); ++i) U.col(m.block_index(i)) += X.col(i);
    return U;
}

}  // namespace

FitResult fit_subspace(const DesignSample& data, const SubspaceModel& m) {
    if (data.X.rows() != data.Y.size())
        throw DimensionMismatch("fit_subspace: X rows != Y length");
    if (data.X.cols() != m.ambient_dim())
        throw DimensionMismatch("fit_subspace: X cols != d");
    if (data.X.rows() < 1) throw ArgumentError("fit_subspace: empty sample");

    const Eigen::MatrixXd U = reduced_design(data.X, m);
    FitResult fit;
    fit.reduced_coeffs = U.completeOrthogonalDecomposition().solve(data.Y);
    fit.theta_hat = m.expand(fit.reduced_coeffs);
    fit.residual_sq = (data.Y - U * fit.reduced_coeffs).squaredNorm();
    return fit;
}

double rip_constant(const Eigen::MatrixXd& A, const std::vector<SubspaceModel>& models) {
    if (models.empty()) throw EmptyModelList("rip_constant: no models");
    const int d = static_cast<int>(A.cols());
    for (const auto& m : models)
        if (m.ambient_dim() != d) throw DimensionMismatch("rip_constant: model dim != cols");

    auto indicator_basis = [&](const SubspaceModel& m) {
        Eigen::MatrixXd B = Eigen::MatrixXd::Zero(d, m.k());
        for (int i = 0; i < d; ++i) B(i, m.block_index(i)) = 1.0;
        return B;
    };

    double delta = 0.0;
    for (size_t i = 0; i < models.size(); ++i) {
        for (size_t j = i; j < models.size(); ++j) {
            Eigen::MatrixXd span(d, models[i].k() + models[j].k());
            span << indicator_basis(models[i]), indicator_basis(models[j]);
            // orthonormal basis of the sum subspace
            Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(span);
            const int r = static_cast<int>(qr.rank());
            const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(d, r);
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(A * Q);
            const auto& sv = svd.singularValues();
            const double smax = sv(0), smin = sv(sv.size() - 1);
            delta = std::max({delta, smax * smax - 1.0, 1.0 - smin * smin});
        }
    }
    return delta;
}

ExploratoryDesign exploratory_distribution(const std::vector<Eigen::VectorXd>& arms,
                                           double tol, int max_iters) {
    if (arms.empty()) throw EmptyArmSet("exploratory_distribution: no arms");
    const int d = static_cast<int>(arms.front().size());
    const int n = static_cast<int>(arms.size());
    for (const auto& x : arms)
        if (x.size() != d) throw DimensionMismatch("exploratory_distribution: ragged arms");

    ExploratoryDesign res;
    res.weights = Eigen::VectorXd::Constant(n, 1.0 / n);

    Eigen::MatrixXd stacked(n, d);
    for (int i = 0; i < n; ++i) stacked.row(i) = arms[static_cast<size_t>(i)];
    if (Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(stacked).rank() < d) {
        res.span_warning = true;
        res.c_min = 0.0;
        return res;
    }

    Eigen::MatrixXd moment = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < n; ++i)
        moment += res.weights[i] * arms[static_cast<size_t>(i)] *
                  arms[static_cast<size_t>(i)].transpose();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    for (int iter = 0; iter < max_iters; ++iter) {
        eig.compute(moment);
        const double lmin = eig.eigenvalues()(0);
        const Eigen::VectorXd v = eig.eigenvectors().col(0);
        int best = 0;
        double best_val = -1.0;
        for (int i = 0; i < n; ++i) {
            const double a = arms[static_cast<size_t>(i)].dot(v);
            if (a * a > best_val) {
                best_val = a * a;
                best = i;
            }
        }
        res.iterations = iter + 1;
        if (best_val - lmin < tol) break;  // linearized improvement
        const double gamma = 2.0 / (iter + 2.0);
        res.weights *= 1.0 - gamma;
        res.weights[best] += gamma;
        moment *= 1.0 - gamma;
        moment += gamma * arms[static_cast<size_t>(best)] *
                  arms[static_cast<size_t>(best)].transpose();
    }
    eig.compute(moment);
    res.c_min = eig.eigenvalues()(0);
    return res;
}

Eigen::VectorXd sphere_exploration_sampler(int d, Rng& rng) {
    if (d < 1) throw ArgumentError("sphere_exploration_sampler: d must be positive");
    Eigen::VectorXd z(d);
    double norm = 0.0;
    do {
        for (int i = 0; i < d; ++i) z[i] = rng.normal();
        norm = z.norm();
    } while (norm == 0.0);
    return z * (std::sqrt(static_cast<double>(d)) / norm);
}

}  // namespace symban
