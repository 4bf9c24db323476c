#include "scalinglab/fbm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>

#include <Eigen/Dense>
#include <fftw3.h>

#include "scalinglab/rng.hpp"

namespace scalinglab {

namespace {

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

GridSpec::GridSpec(double x_min, double x_max, std::size_t num_points) {
    if (!(x_min < 0.0 && 0.0 < x_max))
        throw std::invalid_argument("GridSpec: need x_min < 0 < x_max");
    if (num_points < 3) throw std::invalid_argument("GridSpec: need num_points >= 3");
    spacing_ = (x_max - x_min) / static_cast<double>(num_points - 1);
    const double fractional_index = -x_min / spacing_;
    const double rounded = std::round(fractional_index);
    if (std::abs(fractional_index - rounded) > 1e-9 * std::max(1.0, fractional_index))
        throw std::invalid_argument("GridSpec: 0 does not fall on a grid node");
    zero_index_ = static_cast<std::size_t>(rounded);
    if (zero_index_ == 0 || zero_index_ >= num_points - 1)
        throw std::invalid_argument("GridSpec: 0 must be an interior node");
    num_points_ = num_points;
}

GridSpec GridSpec::symmetric(double half_width, std::size_t num_points) {
    if (num_points % 2 == 0)
        throw std::invalid_argument("GridSpec::symmetric: num_points must be odd");
    return GridSpec(-half_width, half_width, num_points);
}

FbmPath::FbmPath(HurstExponent hurst, GridSpec grid, std::vector<double> values,
                 std::uint64_t seed)
    : hurst_(hurst.value),
      grid_(grid),
      values_(std::move(values)),
      seed_(seed),
      x_min_(grid.x_min()),
      inv_spacing_(1.0 / grid.spacing()) {
    if (values_.size() != grid_.num_points())
        throw std::invalid_argument("FbmPath: value count does not match the grid");
    if (values_[grid_.zero_index()] != 0.0)
        throw std::invalid_argument("FbmPath: value at the x=0 node must be exactly 0");
    for (double v : values_)
        if (!std::isfinite(v)) throw std::invalid_argument("FbmPath: non-finite node value");
}

double fbm_covariance(double x, double y, HurstExponent hurst) {
    const double two_h = 2.0 * hurst.value;
    return 0.5 * (std::pow(std::abs(x), two_h) + std::pow(std::abs(y), two_h) -
                  std::pow(std::abs(x - y), two_h));
}

struct CholeskyFbmSampler::Impl {
    GridSpec grid;
    HurstExponent hurst;
    Eigen::MatrixXd factor;  // lower-triangular L with cov = L L^T over free nodes

    Impl(const GridSpec& g, HurstExponent h) : grid(g), hurst(h) {
        const std::size_t n = grid.num_points();
        if (n > 4096)
            throw std::invalid_argument(
                "sample_fbm_cholesky: grid too large for dense factorization");
        const std::size_t zero = grid.zero_index();
        const std::size_t m = n - 1;  // free nodes: everything except the pinned x=0 node

        std::vector<double> free_nodes;
        free_nodes.reserve(m);
        for (std::size_t i = 0; i < n; ++i)
            if (i != zero) free_nodes.push_back(grid.node(i));

        Eigen::MatrixXd cov(m, m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j <= i; ++j) {
                const double value = fbm_covariance(free_nodes[i], free_nodes[j], hurst);
                cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value;
                cov(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = value;
            }

        Eigen::LLT<Eigen::MatrixXd> llt(cov);
        if (llt.info() != Eigen::Success) {
            cov.diagonal().array() += 1e-12;
            llt.compute(cov);
            if (llt.info() != Eigen::Success)
                throw std::runtime_error(
                    "sample_fbm_cholesky: covariance not positive definite even after jitter");
        }
        factor = llt.matrixL();
    }

    FbmPath sample(std::uint64_t seed) const {
        const std::size_t n = grid.num_points();
        const std::size_t zero = grid.zero_index();
        const std::size_t m = n - 1;
        Rng rng(seed);
        Eigen::VectorXd gauss(static_cast<Eigen::Index>(m));
        for (std::size_t i = 0; i < m; ++i) gauss(static_cast<Eigen::Index>(i)) = rng.normal();
        const Eigen::VectorXd draw = factor.triangularView<Eigen::Lower>() * gauss;

        std::vector<double> values(n, 0.0);
        std::size_t k = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (i != zero) values[i] = draw(static_cast<Eigen::Index>(k++));
        return FbmPath(hurst, grid, std::move(values), seed);
    }
};

CholeskyFbmSampler::CholeskyFbmSampler(const GridSpec& grid, HurstExponent hurst)
    : impl_(std::make_unique<Impl>(grid, hurst)) {}

CholeskyFbmSampler::~CholeskyFbmSampler() = default;

FbmPath CholeskyFbmSampler::sample(std::uint64_t seed) const { return impl_->sample(seed); }

FbmPath sample_fbm_cholesky(const GridSpec& grid, HurstExponent hurst, std::uint64_t seed) {
    return CholeskyFbmSampler(grid, hurst).sample(seed);
}

struct CirculantFbmSampler::Impl {
    GridSpec grid;
    HurstExponent hurst;
    std::size_t num_increments;       // M
    std::size_t embedding_length;     // L = 2M
    std::vector<double> sqrt_eigen;   // sqrt(lambda_k), k = 0..L-1
    fftw_complex* spectrum = nullptr;
    fftw_complex* field = nullptr;
    fftw_plan backward = nullptr;

    Impl(const GridSpec& g, HurstExponent h) : grid(g), hurst(h) {
        num_increments = grid.num_points() - 1;
        embedding_length = 2 * num_increments;
        const std::size_t len = embedding_length;

        // fGn autocovariance at the grid spacing
        const double two_h = 2.0 * hurst.value;
        const double var = std::pow(grid.spacing(), two_h);
        auto gamma = [&](std::size_t k) {
            const double kd = static_cast<double>(k);
            return 0.5 * var *
                   (std::pow(kd + 1.0, two_h) - 2.0 * std::pow(kd, two_h) +
                    std::pow(std::abs(kd - 1.0), two_h));
        };

        std::vector<double> row(len);
        for (std::size_t k = 0; k <= num_increments; ++k) row[k] = gamma(k);
        for (std::size_t k = num_increments + 1; k < len; ++k) row[k] = row[len - k];

        {
            std::lock_guard<std::mutex> lock(fftw_planner_mutex());
            spectrum = fftw_alloc_complex(len);
            field = fftw_alloc_complex(len);
            backward = fftw_plan_dft_1d(static_cast<int>(len), spectrum, field, FFTW_BACKWARD,
                                        FFTW_ESTIMATE);
        }

        for (std::size_t k = 0; k < len; ++k) {
            spectrum[k][0] = row[k];
            spectrum[k][1] = 0.0;
        }
        fftw_execute(backward);  // real even input: backward DFT yields the eigenvalues

        double max_eigen = 0.0, min_eigen = 0.0;
        sqrt_eigen.resize(len);
        for (std::size_t k = 0; k < len; ++k) {
            max_eigen = std::max(max_eigen, field[k][0]);
            min_eigen = std::min(min_eigen, field[k][0]);
        }
        if (min_eigen < -1e-8 * std::max(1.0, max_eigen)) {
            throw std::runtime_error(
                "sample_fbm_circulant: embedding produced negative eigenvalues beyond "
                "tolerance; double the embedding length");
        }
        for (std::size_t k = 0; k < len; ++k)
            sqrt_eigen[k] = std::sqrt(std::max(0.0, field[k][0]));
    }

    ~Impl() {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        if (backward) fftw_destroy_plan(backward);
        if (spectrum) fftw_free(spectrum);
        if (field) fftw_free(field);
    }

    FbmPath sample(std::uint64_t seed) {
        const std::size_t len = embedding_length;
        const std::size_t half = num_increments;  // Nyquist index, len is even
        Rng rng(seed);
        const double inv_sqrt_len = 1.0 / std::sqrt(static_cast<double>(len));

        spectrum[0][0] = sqrt_eigen[0] * rng.normal() * inv_sqrt_len;
        spectrum[0][1] = 0.0;
        spectrum[half][0] = sqrt_eigen[half] * rng.normal() * inv_sqrt_len;
        spectrum[half][1] = 0.0;
        const double inv_sqrt2 = 0.70710678118654752440;
        for (std::size_t k = 1; k < half; ++k) {
            const double amp = sqrt_eigen[k] * inv_sqrt2 * inv_sqrt_len;
            const double re = amp * rng.normal();
            const double im = amp * rng.normal();
            spectrum[k][0] = re;
            spectrum[k][1] = im;
            spectrum[len - k][0] = re;
            spectrum[len - k][1] = -im;
        }
        fftw_execute(backward);

        // cumulative sum of the first M increments, anchored at the x=0 node
        const std::size_t n = grid.num_points();
        const std::size_t zero = grid.zero_index();
        std::vector<double> values(n);
        values[zero] = 0.0;
        for (std::size_t i = zero; i + 1 < n; ++i) values[i + 1] = values[i] + field[i][0];
        for (std::size_t i = zero; i > 0; --i) values[i - 1] = values[i] - field[i - 1][0];
        return FbmPath(hurst, grid, std::move(values), seed);
    }
};

CirculantFbmSampler::CirculantFbmSampler(const GridSpec& grid, HurstExponent hurst)
    : impl_(std::make_unique<Impl>(grid, hurst)) {}

CirculantFbmSampler::~CirculantFbmSampler() = default;

FbmPath CirculantFbmSampler::sample(std::uint64_t seed) { return impl_->sample(seed); }

FbmPath sample_fbm_circulant(const GridSpec& grid, HurstExponent hurst, std::uint64_t seed) {
    CirculantFbmSampler sampler(grid, hurst);
    return sampler.sample(seed);
}

void write_fbm_csv(const std::string& filename, const FbmPath& path) {
    std::ofstream out(filename);
    if (!out) throw std::runtime_error("write_fbm_csv: cannot open " + filename);
    char line[128];
    std::snprintf(line, sizeof(line), "# hurst=%.17g seed=%llu\n", path.hurst(),
                  static_cast<unsigned long long>(path.seed()));
    out << line << "x,value\n";
    for (std::size_t i = 0; i < path.grid().num_points(); ++i) {
        std::snprintf(line, sizeof(line), "%.17g,%.17g\n", path.grid().node(i),
                      path.values()[i]);
        out << line;
    }
    if (!out) throw std::runtime_error("write_fbm_csv: write failed for " + filename);
}

FbmPath read_fbm_csv(const std::string& filename) {
    std::ifstream in(filename);
    if (!in) throw std::runtime_error("read_fbm_csv: cannot open " + filename);
    std::string header;
    if (!std::getline(in, header) || header.rfind("# hurst=", 0) != 0)
        throw std::runtime_error("read_fbm_csv: missing metadata line");
    double hurst = 0.0;
    unsigned long long seed = 0;
    if (std::sscanf(header.c_str(), "# hurst=%lf seed=%llu", &hurst, &seed) != 2)
        throw std::runtime_error("read_fbm_csv: malformed metadata line");
    std::string column_header;
    if (!std::getline(in, column_header) || column_header != "x,value")
        throw std::runtime_error("read_fbm_csv: missing x,value header");

    std::vector<double> xs, values;
    std::string row;
    while (std::getline(in, row)) {
        if (row.empty()) continue;
        double x = 0.0, v = 0.0;
        if (std::sscanf(row.c_str(), "%lf,%lf", &x, &v) != 2)
            throw std::runtime_error("read_fbm_csv: malformed row '" + row + "'");
        xs.push_back(x);
        values.push_back(v);
    }
    if (xs.size() < 3) throw std::runtime_error("read_fbm_csv: too few rows");
    GridSpec grid(xs.front(), xs.back(), xs.size());
    return FbmPath(HurstExponent(hurst), grid, std::move(values), seed);
}

}
