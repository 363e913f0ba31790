#pragma once

#include <Eigen/Dense>
#include <vector>

#include "symban/partition.hpp"

namespace symban {

/// Fixed-point subspace of a partition: the block-constant vectors.
/// Carries the reduced regression view (block-sum feature map, dimension
/// k = block count).
class SubspaceModel {
  public:
    explicit SubspaceModel(Partition partition);

    const Partition& partition() const { return partition_; }
    int ambient_dim() const { return partition_.ground_set_size(); }
    int k() const { return k_; }
    // block id of coordinate i (0-based position).
    int block_index(int i) const { return block_index_[static_cast<size_t>(i)]; }
    const std::vector<int>& block_sizes() const { return block_sizes_; }

    // Expand reduced coefficients (one value per block) to a
    // block-constant ambient vector.
    Eigen::VectorXd expand(const Eigen::VectorXd& reduced) const;

  private:
    Partition partition_;
    int k_;
    std::vector<int> block_index_;
    std::vector<int> block_sizes_;
};

struct DesignSample {
    Eigen::MatrixXd X;  // n x d, rows are arms played
    Eigen::VectorXd Y;  // n observed rewards
};

struct FitResult {
    Eigen::VectorXd theta_hat;       // block-constant, length d
    Eigen::VectorXd reduced_coeffs;  // length k
    double residual_sq = 0.0;        // ||Y - X theta_hat||^2
};

// Orthogonal projection onto the span of the block indicator vectors:
// every coordinate replaced by its block mean. Idempotent, self-adjoint,
// a contraction.
Eigen::VectorXd project_point(const Eigen::VectorXd& x, const SubspaceModel& m);

// Block-sum feature map: <x, theta> = <reduced_features(x), c> whenever
// theta takes value c_b on block b.
Eigen::VectorXd reduced_features(const Eigen::VectorXd& x, const SubspaceModel& m);

// Least squares restricted to the model's subspace, solved in the
// k-dimensional reduced coordinates (minimum-norm solution when the
// reduced design is rank-deficient).
FitResult fit_subspace(const DesignSample& data, const SubspaceModel& m);

// Smallest restricted-isometry constant of A over the collection of sum
// subspaces span(m_i + m_j), i <= j: max over pairs of
// max(1 - sigma_min^2, sigma_max^2 - 1) of A restricted to an orthonormal
// basis. Exact (one SVD per pair); meant for small validation instances.
double rip_constant(const Eigen::MatrixXd& A, const std::vector<SubspaceModel>& models);

struct ExploratoryDesign {
    Eigen::VectorXd weights;  // probability vector over the arm list
    double c_min = 0.0;       // lambda_min of the final moment matrix
    bool span_warning = false;
    int iterations = 0;
};

// Frank-Wolfe maximization of lambda_min(sum_i w_i x_i x_i^T) over the
// simplex: each step moves mass toward the arm most aligned with the
// current minimal eigenvector (step 2/(iter+2)), stopping when the
// linearized improvement falls below tol.
ExploratoryDesign exploratory_distribution(const std::vector<Eigen::VectorXd>& arms,
                                           double tol = 1e-4, int max_iters = 2000);

// Uniform sample on the radius-sqrt(d) sphere; the population second
// moment is the identity, so C_min = 1.
Eigen::VectorXd sphere_exploration_sampler(int d, Rng& rng);

}  // namespace symban
