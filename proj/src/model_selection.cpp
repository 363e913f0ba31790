#include "symban/model_selection.hpp"

#include <Eigen/Eigenvalues>
#include <limits>

#include "symban/errors.hpp"

namespace symban {

namespace {

// Residuals are compared at the natural scale ||Y||^2 (every subspace
// residual lies in [0, ||Y||^2], so this makes "1e-12 relative" meaningful
// even for exact fits with residual ~ 0).
bool near_equal(double r1, double r2, double y_sq) {
    return std::abs(r1 - r2) <= 1e-12 * std::max(y_sq, 1e-300);
}

}  // namespace

std::vector<SubspaceModel> build_model_pool(int d, int max_blocks, PartitionClass c,
                                            std::uint64_t cap) {
    std::vector<SubspaceModel> pool;
    for (auto& p : enumerate_partitions(d, c, max_blocks, cap))
        pool.emplace_back(std::move(p));
    return pool;
}

SelectionResult select_bruteforce(const DesignSample& data,
                                  const std::vector<SubspaceModel>& pool) {
    if (pool.empty()) throw EmptyPool("select_bruteforce: empty pool");
    const double y_sq = data.Y.squaredNorm();

    const SubspaceModel* best = nullptr;
    FitResult best_fit;
    for (const auto& m : pool) {
        FitResult fit = fit_subspace(data, m);
        bool take = false;
        if (best == nullptr) {
            take = true;
        } else if (near_equal(fit.residual_sq, best_fit.residual_sq, y_sq)) {
            if (m.k() != best->k())
                take = m.k() < best->k();
            else
                take = m.partition() < best->partition();
        } else {
            take = fit.residual_sq < best_fit.residual_sq;
        }
        if (take) {
            best = &m;
            best_fit = std::move(fit);
        }
    }
    return SelectionResult{*best, std::move(best_fit), {},
                           static_cast<std::int64_t>(pool.size())};
}

namespace {

// One greedy level, evaluated on the reduced Gram system. For the merge
// constraint e = e_a - e_b, the residual increase of the constrained
// least squares is (beta_a - beta_b)^2 / (e^T G+ e) when e lies in
// range(G); a merge direction with a null-space component costs nothing
// because the fit is unchanged along it.
struct GramLevel {
    Eigen::MatrixXd eigvecs;  // k x r, kept eigenvectors
    Eigen::VectorXd eigvals;  // r kept eigenvalues
    Eigen::VectorXd beta;     // min-norm solution G+ c
    double residual;          // yy - c . beta, clamped at 0

    GramLevel(const Eigen::MatrixXd& gram, const Eigen::VectorXd& rhs, double yy) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
        const Eigen::VectorXd& vals = eig.eigenvalues();
        const int k = static_cast<int>(gram.rows());
        const double tol = std::max(vals(k - 1), 0.0) * k * 1e-13;
        int first = 0;
        while (first < k && vals(first) <= tol) ++first;
        const int r = k - first;
        eigvecs = eig.eigenvectors().rightCols(r);
        eigvals = vals.tail(r);
        beta = eigvecs * (eigvecs.transpose() * rhs).cwiseQuotient(eigvals);
        residual = std::max(0.0, yy - rhs.dot(beta));
    }

    double merge_cost(int a, int b) const {
        double denom = 0.0, kept = 0.0;
        for (int l = 0; l < eigvals.size(); ++l) {
            const double w = eigvecs(a, l) - eigvecs(b, l);
            denom += w * w / eigvals(l);
            kept += w * w;
        }
        if (2.0 - kept > 1e-9) return 0.0;  // e leaves range(G)
        const double num = beta(a) - beta(b);
        return num * num / denom;
    }
};

}  // namespace

SelectionResult select_greedy(const DesignSample& data, int d0, PartitionClass c) {
    const int d = static_cast<int>(data.X.cols());
    if (d0 < 1 || d0 > d) throw ArgumentError("select_greedy: d0 out of [1, d]");
    if (data.X.rows() != data.Y.size())
        throw DimensionMismatch("select_greedy: X rows != Y length");
    if (data.X.rows() < 1) throw ArgumentError("select_greedy: empty sample");

    const double yy = data.Y.squaredNorm();
    Eigen::MatrixXd gram = data.X.transpose() * data.X;
    Eigen::VectorXd rhs = data.X.transpose() * data.Y;

    Partition p = Partition::finest(d);
    SelectionResult res{SubspaceModel(p), {}, {}, 0};

    while (p.block_count() > d0) {
        const auto pairs = coarsen_pairs(p, c);
        const GramLevel level(gram, rhs, yy);

        int best_a = -1, best_b = -1;
        double best_cost = std::numeric_limits<double>::infinity();
        Partition best_part = p;  // placeholder until the first candidate
        for (auto [a, b] : pairs) {
            ++res.candidates_examined;
            const double cost = level.merge_cost(a, b);
            if (best_a < 0) {
                best_a = a;
                best_b = b;
                best_cost = cost;
                best_part = merge_blocks(p, a, b);
            } else if (near_equal(cost, best_cost, yy)) {
                Partition cand = merge_blocks(p, a, b);
                if (cand < best_part) {
                    best_part = std::move(cand);
                    best_a = a;
                    best_b = b;
                    best_cost = std::min(best_cost, cost);
                }
            } else if (cost < best_cost) {
                best_a = a;
                best_b = b;
                best_cost = cost;
                best_part = merge_blocks(p, a, b);
            }
        }

        // fold row/col b into a; canonical block order keeps a's position
        // because the merged block inherits a's minimum
        const int k = p.block_count();
        Eigen::MatrixXd folded = gram;
        folded.col(best_a) += folded.col(best_b);
        folded.row(best_a) += folded.row(best_b);
        Eigen::VectorXd rhs_folded = rhs;
        rhs_folded(best_a) += rhs_folded(best_b);
        Eigen::MatrixXd g2(k - 1, k - 1);
        Eigen::VectorXd c2(k - 1);
        auto remap = [&](int j) { return j < best_b ? j : j - 1; };
        for (int i = 0; i < k; ++i) {
            if (i == best_b) continue;
            c2(remap(i)) = rhs_folded(i);
            for (int j = 0; j < k; ++j) {
                if (j == best_b) continue;
                g2(remap(i), remap(j)) = folded(i, j);
            }
        }
        gram = std::move(g2);
        rhs = std::move(c2);
        p = std::move(best_part);
        res.residual_trace.emplace_back(p.block_count(),
                                        std::max(0.0, level.residual + best_cost));
    }

    res.model = SubspaceModel(p);
    res.fit = fit_subspace(data, res.model);
    return res;
}

double separation_margin(const Eigen::VectorXd& theta, const Partition& p) {
    if (theta.size() != p.ground_set_size())
        throw DimensionMismatch("separation_margin: theta length != d");
    if (p.block_count() < 2) return std::numeric_limits<double>::infinity();
    double margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < theta.size(); ++i)
        for (int j = i + 1; j < theta.size(); ++j)
            if (p.block_of(i + 1) != p.block_of(j + 1))
                margin = std::min(margin, std::abs(theta[i] - theta[j]));
    return margin;
}

}  // namespace symban
