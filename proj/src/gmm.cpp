#include "repshift/gmm.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "repshift/rng.hpp"

namespace repshift {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // log(2*pi)

Eigen::Matrix3d floor_eigenvalues(const Eigen::Matrix3d& covariance) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(covariance);
    Eigen::Vector3d values = solver.eigenvalues().cwiseMax(Gmm::kCovarianceFloor);
    return solver.eigenvectors() * values.asDiagonal() * solver.eigenvectors().transpose();
}

}  // namespace

void Gmm::finalize_component(double weight, const Eigen::Vector3d& mean,
                             const Eigen::Matrix3d& covariance) {
    const Eigen::Matrix3d floored = floor_eigenvalues(covariance);
    weights_.push_back(weight);
    means_.push_back(mean);
    inverse_covariances_.push_back(floored.inverse());
    log_norms_.push_back(std::log(weight) - 0.5 * (3.0 * kLog2Pi + std::log(floored.determinant())));
}

double Gmm::component_log_density(int k, const Eigen::Vector3d& z) const {
    const Eigen::Vector3d d = z - means_[k];
    return log_norms_[k] - 0.5 * d.dot(inverse_covariances_[k] * d);
}

double Gmm::log_likelihood(const Eigen::Vector3d& z) const {
    double best = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < component_count(); ++k)
        best = std::max(best, component_log_density(k, z));
    double sum = 0.0;
    for (int k = 0; k < component_count(); ++k)
        sum += std::exp(component_log_density(k, z) - best);
    return best + std::log(sum);
}

Gmm Gmm::fit_kmeans(std::span<const Eigen::Vector3d> samples, int components, std::uint64_t seed) {
    if (samples.empty()) throw std::invalid_argument("cannot fit a mixture on zero samples");
    if (components < 1) throw std::invalid_argument("mixture needs at least one component");

    const std::size_t n = samples.size();
    const int k = std::min<int>(components, static_cast<int>(n));
    Xoshiro256 rng(seed);

    // k-means++ seeding
    std::vector<Eigen::Vector3d> centers;
    centers.reserve(k);
    centers.push_back(samples[rng.below(n)]);
    std::vector<double> dist2(n);
    while (static_cast<int>(centers.size()) < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : centers) best = std::min(best, (samples[i] - c).squaredNorm());
            dist2[i] = best;
            total += best;
        }
        if (total <= 0.0) break;  // fewer distinct colors than components
        double target = rng.next_double() * total;
        std::size_t chosen = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
            target -= dist2[i];
            if (target <= 0.0) {
                chosen = i;
                break;
            }
        }
        centers.push_back(samples[chosen]);
    }

    // Lloyd iterations
    std::vector<int> assignment(n, 0);
    for (int iter = 0; iter < 10; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < centers.size(); ++c) {
                const double d = (samples[i] - centers[c]).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = static_cast<int>(c);
                }
            }
            if (assignment[i] != best) {
                assignment[i] = best;
                changed = true;
            }
        }
        std::vector<Eigen::Vector3d> sums(centers.size(), Eigen::Vector3d::Zero());
        std::vector<std::size_t> counts(centers.size(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            sums[assignment[i]] += samples[i];
            ++counts[assignment[i]];
        }
        for (std::size_t c = 0; c < centers.size(); ++c)
            if (counts[c] > 0) centers[c] = sums[c] / static_cast<double>(counts[c]);
        if (!changed) break;
    }

    // cluster moments -> mixture
    Gmm gmm;
    for (std::size_t c = 0; c < centers.size(); ++c) {
        Eigen::Vector3d mean = Eigen::Vector3d::Zero();
        std::size_t count = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (assignment[i] == static_cast<int>(c)) {
                mean += samples[i];
                ++count;
            }
        if (count == 0) continue;
        mean /= static_cast<double>(count);
        Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
        for (std::size_t i = 0; i < n; ++i)
            if (assignment[i] == static_cast<int>(c)) {
                const Eigen::Vector3d d = samples[i] - mean;
                cov += d * d.transpose();
            }
        cov /= static_cast<double>(count);
        gmm.finalize_component(static_cast<double>(count) / static_cast<double>(n), mean, cov);
    }
    return gmm;
}

Gmm Gmm::em_refit(std::span<const Eigen::Vector3d> samples) const {
    if (samples.empty()) throw std::invalid_argument("cannot refit a mixture on zero samples");
    const std::size_t n = samples.size();
    const int k = component_count();

    std::vector<double> weight_sum(k, 0.0);
    std::vector<Eigen::Vector3d> mean_sum(k, Eigen::Vector3d::Zero());
    std::vector<Eigen::Matrix3d> scatter(k, Eigen::Matrix3d::Zero());
    std::vector<double> resp(k);

    for (std::size_t i = 0; i < n; ++i) {
        double best = -std::numeric_limits<double>::infinity();
        for (int c = 0; c < k; ++c) {
            resp[c] = component_log_density(c, samples[i]);
            best = std::max(best, resp[c]);
        }
        double total = 0.0;
        for (int c = 0; c < k; ++c) {
            resp[c] = std::exp(resp[c] - best);
            total += resp[c];
        }
        for (int c = 0; c < k; ++c) {
            const double r = resp[c] / total;
            weight_sum[c] += r;
            mean_sum[c] += r * samples[i];
        }
    }

    std::vector<Eigen::Vector3d> new_means(k, Eigen::Vector3d::Zero());
    for (int c = 0; c < k; ++c)
        if (weight_sum[c] > 0.0) new_means[c] = mean_sum[c] / weight_sum[c];

    for (std::size_t i = 0; i < n; ++i) {
        double best = -std::numeric_limits<double>::infinity();
        for (int c = 0; c < k; ++c) {
            resp[c] = component_log_density(c, samples[i]);
            best = std::max(best, resp[c]);
        }
        double total = 0.0;
        for (int c = 0; c < k; ++c) {
            resp[c] = std::exp(resp[c] - best);
            total += resp[c];
        }
        for (int c = 0; c < k; ++c) {
            const Eigen::Vector3d d = samples[i] - new_means[c];
            scatter[c] += (resp[c] / total) * d * d.transpose();
        }
    }

    Gmm refit;
    for (int c = 0; c < k; ++c) {
        if (weight_sum[c] < 1e-12) continue;  // dead component
        refit.finalize_component(weight_sum[c] / static_cast<double>(n), new_means[c],
                                 scatter[c] / weight_sum[c]);
    }
    if (refit.component_count() == 0)
        throw std::logic_error("mixture refit lost every component");
    return refit;
}

}  // namespace repshift
