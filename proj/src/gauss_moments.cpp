#include "scalinglab/gauss_moments.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "scalinglab/stats.hpp"

namespace scalinglab {

namespace {

constexpr std::size_t kMaxMultisetSize = 16;

struct Position {
    std::size_t cov_index;
    int factor_id;  // >= 0 marks the two clones of one squared factor, -1 otherwise
};

/// Sum over pairings of `positions`, always matching the first unpaired
/// position to avoid double counting. Pairs joining the two clones of one
/// squared factor are skipped (that is what makes a pairing proper).
void enumerate_pairings(const CovMatrix& cov, std::vector<Position>& positions,
                        std::vector<bool>& used, double product, CompensatedSum& total) {
    std::size_t first = positions.size();
    for (std::size_t i = 0; i < positions.size(); ++i)
        if (!used[i]) {
            first = i;
            break;
        }
    if (first == positions.size()) {
        total.add(product);
        return;
    }
    used[first] = true;
    for (std::size_t j = first + 1; j < positions.size(); ++j) {
        if (used[j]) continue;
        if (positions[first].factor_id >= 0 &&
            positions[first].factor_id == positions[j].factor_id)
            continue;
        used[j] = true;
        enumerate_pairings(cov, positions, used, product *
                               cov.at(positions[first].cov_index, positions[j].cov_index),
                           total);
        used[j] = false;
    }
    used[first] = false;
}

double pairing_sum(const CovMatrix& cov, std::vector<Position> positions) {
    if (positions.size() % 2 != 0) return 0.0;
    if (positions.empty()) return 1.0;
    std::vector<bool> used(positions.size(), false);
    CompensatedSum total;
    enumerate_pairings(cov, positions, used, 1.0, total);
    return total.value();
}

void check_indices(const CovMatrix& cov, const std::vector<std::size_t>& indices) {
    for (std::size_t s : indices)
        if (s >= cov.dimension())
            throw std::invalid_argument("gauss_moments: index outside the covariance matrix");
}

}  // namespace

CovMatrix::CovMatrix(std::size_t dimension)
    : dim_(dimension), entries_(dimension * dimension, 0.0) {
    if (dimension == 0) throw std::invalid_argument("CovMatrix: dimension must be positive");
}

CovMatrix CovMatrix::identity(std::size_t dimension) {
    CovMatrix cov(dimension);
    for (std::size_t i = 0; i < dimension; ++i) cov.set(i, i, 1.0);
    return cov;
}

void CovMatrix::set(std::size_t i, std::size_t j, double value) {
    if (i >= dim_ || j >= dim_) throw std::out_of_range("CovMatrix::set: index out of range");
    entries_[i * dim_ + j] = value;
    entries_[j * dim_ + i] = value;
}

double isserlis_moment(const CovMatrix& cov, const MomentQuery& query) {
    check_indices(cov, query.multiset);
    if (query.multiset.size() > kMaxMultisetSize)
        throw std::invalid_argument("isserlis_moment: multiset size exceeds the guard of 16");
    std::vector<Position> positions;
    positions.reserve(query.multiset.size());
    for (std::size_t s : query.multiset) positions.push_back({s, -1});
    return pairing_sum(cov, std::move(positions));
}

double proper_pairing_moment(const CovMatrix& cov,
                             const std::vector<std::size_t>& squared_indices,
                             const std::vector<std::size_t>& single_indices) {
    check_indices(cov, squared_indices);
    check_indices(cov, single_indices);
    const std::size_t total = 2 * squared_indices.size() + single_indices.size();
    if (total > kMaxMultisetSize)
        throw std::invalid_argument(
            "proper_pairing_moment: combined multiset size exceeds the guard of 16");
    std::vector<Position> positions;
    positions.reserve(total);
    int factor = 0;
    for (std::size_t s : squared_indices) {
        positions.push_back({s, factor});
        positions.push_back({s, factor});
        ++factor;
    }
    for (std::size_t s : single_indices) positions.push_back({s, -1});
    return pairing_sum(cov, std::move(positions));
}

double exp_tilted_proper_moment(const CovMatrix& cov, std::size_t tilt_index,
                                const std::vector<std::size_t>& squared_indices) {
    check_indices(cov, squared_indices);
    check_indices(cov, {tilt_index});
    if (2 * squared_indices.size() > kMaxMultisetSize)
        throw std::invalid_argument(
            "exp_tilted_proper_moment: multiset size exceeds the guard of 16");

    const std::size_t n = squared_indices.size();
    CompensatedSum total;
    std::vector<std::size_t> part_a1, part_a2;
    std::vector<int> assignment(n, 0);
    // every factor goes to A1 (keep X^2 - R), A2 (take 2 R_t X) or A3 (take R_t^2)
    for (;;) {
        part_a1.clear();
        part_a2.clear();
        double tilt_product = 1.0;
        std::size_t a2_count = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t s = squared_indices[i];
            switch (assignment[i]) {
                case 0: part_a1.push_back(s); break;
                case 1:
                    part_a2.push_back(s);
                    tilt_product *= 2.0 * cov.at(tilt_index, s);
                    ++a2_count;
                    break;
                default: {
                    const double r = cov.at(tilt_index, s);
                    tilt_product *= r * r;
                    break;
                }
            }
        }
        if (a2_count % 2 == 0)
            total.add(tilt_product * proper_pairing_moment(cov, part_a1, part_a2));

        std::size_t digit = 0;
        while (digit < n && assignment[digit] == 2) assignment[digit++] = 0;
        if (digit == n) break;
        ++assignment[digit];
    }
    return std::exp(0.5 * cov.at(tilt_index, tilt_index)) * total.value();
}

GaussianSampler::GaussianSampler(const CovMatrix& cov) : dim_(cov.dimension()) {
    Eigen::MatrixXd matrix(dim_, dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j)
            matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cov.at(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("GaussianSampler: eigendecomposition failed");
    if (solver.eigenvalues().minCoeff() < -1e-10)
        throw std::invalid_argument("GaussianSampler: covariance is not positive semi-definite");
    Eigen::VectorXd scale = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    Eigen::MatrixXd factor = solver.eigenvectors() * scale.asDiagonal();
    factor_.resize(dim_ * dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j)
            factor_[i * dim_ + j] =
                factor(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
}

std::size_t GaussianSampler::dimension() const { return dim_; }

void GaussianSampler::sample(Rng& rng, double* out) const {
    double gauss[64];
    if (dim_ > 64) throw std::invalid_argument("GaussianSampler: dimension guard exceeded");
    for (std::size_t j = 0; j < dim_; ++j) gauss[j] = rng.normal();
    for (std::size_t i = 0; i < dim_; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < dim_; ++j) acc += factor_[i * dim_ + j] * gauss[j];
        out[i] = acc;
    }
}

}
