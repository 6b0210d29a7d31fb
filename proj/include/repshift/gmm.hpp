#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace repshift {

/// Full-covariance Gaussian mixture over RGB values scaled to [0,1].
/// Covariance eigenvalues are floored at 1e-4 so solid-color sample sets
/// stay invertible.
class Gmm {
public:
    static constexpr double kCovarianceFloor = 1e-4;

    /// Seeded k-means++ initialization followed by Lloyd iterations, then
    /// per-cluster moments. Empty clusters are dropped.
    static Gmm fit_kmeans(std::span<const Eigen::Vector3d> samples, int components,
                          std::uint64_t seed);

    /// One EM iteration starting from this mixture's parameters; never
    /// decreases the sample likelihood (up to the covariance floor).
    Gmm em_refit(std::span<const Eigen::Vector3d> samples) const;

    /// log sum_k w_k N(z; mu_k, Sigma_k)
    double log_likelihood(const Eigen::Vector3d& z) const;

    int component_count() const { return static_cast<int>(weights_.size()); }

private:
    void finalize_component(double weight, const Eigen::Vector3d& mean,
                            const Eigen::Matrix3d& covariance);
    double component_log_density(int k, const Eigen::Vector3d& z) const;

    std::vector<double> weights_;
    std::vector<Eigen::Vector3d> means_;
    std::vector<Eigen::Matrix3d> inverse_covariances_;
    std::vector<double> log_norms_;  // -0.5*(3*log(2*pi) + log det Sigma) + log w
};

}  // namespace repshift
