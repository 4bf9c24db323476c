#include "scalinglab/targets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace scalinglab {

const char* to_string(TargetKind kind) {
    switch (kind) {
        case TargetKind::rwm_rough: return "rwm_rough";
        case TargetKind::mala_rough: return "mala_rough";
        case TargetKind::rwm_osc: return "rwm_osc";
        case TargetKind::mala_osc: return "mala_osc";
    }
    return "unknown";
}

double localisation(double x, const LocalisationParams& params) {
    const double knee = std::pow(params.c, 1.0 / (2.0 * params.hurst.value));
    const double ax = std::abs(x);
    if (ax <= knee) return 1.0;
    const double scale = std::pow(params.c, 3.0 / (2.0 * params.hurst.value));
    return scale / (ax * ax * ax);
}

StationaryTable::StationaryTable(std::vector<double> node_x,
                                 const std::vector<double>& log_density)
    : node_x_(std::move(node_x)), log_density_(log_density) {
    const std::size_t n = node_x_.size();
    if (n < 2 || log_density_.size() != n)
        throw std::invalid_argument("StationaryTable: need matching node/density tables");
    spacing_ = (node_x_.back() - node_x_.front()) / static_cast<double>(n - 1);

    cum_mass_.assign(n, 0.0);
    CompensatedSum acc;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double d = log_density_[i + 1] - log_density_[i];
        double mass;
        if (std::abs(d) < 1e-12)
            mass = spacing_ * std::exp(0.5 * (log_density_[i] + log_density_[i + 1]));
        else
            mass = spacing_ * std::exp(log_density_[i]) * std::expm1(d) / d;
        if (!std::isfinite(mass) || mass < 0.0)
            throw std::runtime_error("StationaryTable: non-finite segment mass");
        acc.add(mass);
        cum_mass_[i + 1] = acc.value();
    }
    total_mass_ = cum_mass_.back();
    if (!(total_mass_ > 0.0)) throw std::runtime_error("StationaryTable: zero total mass");

    const std::size_t guide_cells = 1 << 14;
    guide_.assign(guide_cells + 1, 0);
    std::size_t seg = 0;
    for (std::size_t j = 0; j <= guide_cells; ++j) {
        const double boundary =
            total_mass_ * static_cast<double>(j) / static_cast<double>(guide_cells);
        while (seg + 1 < n - 1 && cum_mass_[seg + 1] < boundary) ++seg;
        guide_[j] = static_cast<std::uint32_t>(seg);
    }
    guide_.back() = static_cast<std::uint32_t>(n - 2);
    guide_scale_ = static_cast<double>(guide_cells) / total_mass_;
}

MarginalTarget::MarginalTarget(TargetKind kind, double x_min, double x_max, Payload payload)
    : kind_(kind), x_min_(x_min), x_max_(x_max), payload_(std::move(payload)) {
    if (!(x_min < x_max)) throw std::invalid_argument("MarginalTarget: empty domain");
}

double MarginalTarget::log_xi(double x) const {
    if (!in_domain(x)) return -std::numeric_limits<double>::infinity();
    return std::visit([x](const auto& p) { return p.log_xi(x); }, payload_);
}

bool MarginalTarget::has_derivatives() const {
    // the rough RWM potential is nowhere differentiable; the oscillatory RWM
    // kind keeps its derivatives hidden as well (only the MALA kinds need them)
    return kind_ == TargetKind::mala_rough || kind_ == TargetKind::mala_osc;
}

double MarginalTarget::v_prime(double x) const {
    if (const auto* mala = std::get_if<MalaRoughPayload>(&payload_)) return mala->v_prime(x);
    if (const auto* osc = std::get_if<OscPayload>(&payload_))
        if (kind_ == TargetKind::mala_osc) return osc->v_prime(x);
    throw std::logic_error("MarginalTarget: this target kind exposes no potential derivative");
}

double MarginalTarget::v_second(double x) const {
    if (const auto* mala = std::get_if<MalaRoughPayload>(&payload_)) return mala->v_second(x);
    if (const auto* osc = std::get_if<OscPayload>(&payload_))
        if (kind_ == TargetKind::mala_osc) return osc->v_second(x);
    throw std::logic_error("MarginalTarget: this target kind exposes no potential derivative");
}

double MarginalTarget::norm_const() const {
    if (!norm_const_) throw std::logic_error("MarginalTarget: call normalize_and_tabulate first");
    return *norm_const_;
}

double MarginalTarget::sample_stationary(Rng& rng) const {
    if (!norm_const_) throw std::logic_error("MarginalTarget: call normalize_and_tabulate first");
    return table_.sample(rng);
}

const std::vector<std::pair<double, double>>& MarginalTarget::cdf_table() const {
    if (!norm_const_) throw std::logic_error("MarginalTarget: call normalize_and_tabulate first");
    return cdf_pairs_;
}

const StationaryTable& MarginalTarget::stationary_table() const {
    if (!norm_const_) throw std::logic_error("MarginalTarget: call normalize_and_tabulate first");
    return table_;
}

std::string MarginalTarget::descriptor() const {
    std::ostringstream out;
    out << "kind=" << to_string(kind_);
    char buf[64];
    auto put = [&](const char* key, double v) {
        std::snprintf(buf, sizeof(buf), " %s=%.12g", key, v);
        out << buf;
    };
    if (hurst_) put("H", *hurst_);
    if (c_) put("c", *c_);
    if (osc_a_) put("a", *osc_a_);
    if (osc_b_) put("b", *osc_b_);
    put("x_min", x_min_);
    put("x_max", x_max_);
    if (env_seed_) out << " seed=" << *env_seed_;
    if (norm_const_) put("norm_const", *norm_const_);
    return out.str();
}

MarginalTarget build_rwm_rough(FbmPath path) {
    auto shared = std::make_shared<const FbmPath>(std::move(path));
    MarginalTarget target(TargetKind::rwm_rough, shared->x_min(), shared->x_max(),
                          RwmRoughPayload{shared});
    target.env_seed_ = shared->seed();
    target.hurst_ = shared->hurst();
    return target;
}

MarginalTarget build_mala_rough(FbmPath path, const LocalisationParams& params) {
    if (params.hurst.value != path.hurst())
        throw std::invalid_argument("build_mala_rough: localisation H differs from the path H");
    auto shared = std::make_shared<const FbmPath>(std::move(path));
    const GridSpec& grid = shared->grid();
    const std::size_t n = grid.num_points();
    const std::size_t zero = grid.zero_index();
    const double h = grid.spacing();

    MalaRoughPayload payload;
    payload.path = shared;
    payload.c = params.c;
    payload.phi_scale = std::pow(params.c, 3.0 / (2.0 * params.hurst.value));
    payload.phi_knee = std::pow(params.c, 1.0 / (2.0 * params.hurst.value));

    // integrands B phi_c and u B phi_c at the nodes
    std::vector<double> f(n), g(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = grid.node(i);
        const double b_phi = shared->values()[i] * payload.phi(x);
        f[i] = b_phi;
        g[i] = x * b_phi;
    }

    // signed cumulative trapezoid anchored at the x=0 node
    std::vector<double> i0(n), i1(n);
    i0[zero] = 0.0;
    i1[zero] = 0.0;
    for (std::size_t i = zero; i + 1 < n; ++i) {
        i0[i + 1] = i0[i] + 0.5 * h * (f[i] + f[i + 1]);
        i1[i + 1] = i1[i] + 0.5 * h * (g[i] + g[i + 1]);
    }
    for (std::size_t i = zero; i > 0; --i) {
        i0[i - 1] = i0[i] - 0.5 * h * (f[i - 1] + f[i]);
        i1[i - 1] = i1[i] - 0.5 * h * (g[i - 1] + g[i]);
    }
    payload.i0 = detail::LinearTable{grid.x_min(), 1.0 / h, std::move(i0)};
    payload.i1 = detail::LinearTable{grid.x_min(), 1.0 / h, std::move(i1)};

    MarginalTarget target(TargetKind::mala_rough, shared->x_min(), shared->x_max(),
                          std::move(payload));
    target.env_seed_ = shared->seed();
    target.hurst_ = shared->hurst();
    target.c_ = params.c;
    return target;
}

MarginalTarget build_oscillatory(TargetKind kind, const OscParams& params, double x_min,
                                 double x_max) {
    if (kind != TargetKind::rwm_osc && kind != TargetKind::mala_osc)
        throw std::invalid_argument("build_oscillatory: kind must be rwm_osc or mala_osc");
    MarginalTarget target(kind, x_min, x_max, OscPayload{kind, params.a, params.b});
    target.osc_a_ = params.a;
    target.osc_b_ = params.b;
    return target;
}

MarginalTarget normalize_and_tabulate(MarginalTarget target, std::size_t resolution) {
    if (resolution < 1000)
        throw std::invalid_argument("normalize_and_tabulate: resolution must be >= 1000");

    // quadrature nodes: the path grid where the target carries one, otherwise
    // `resolution` uniform nodes (made odd so Simpson oracles can reuse them)
    std::vector<double> nodes;
    if (const auto* rough = std::get_if<RwmRoughPayload>(&target.payload_)) {
        const GridSpec& grid = rough->path->grid();
        nodes.resize(grid.num_points());
        for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i] = grid.node(i);
    } else if (const auto* mala = std::get_if<MalaRoughPayload>(&target.payload_)) {
        const GridSpec& grid = mala->path->grid();
        nodes.resize(grid.num_points());
        for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i] = grid.node(i);
    } else {
        std::size_t count = resolution | 1;
        nodes.resize(count);
        const double h = (target.x_max_ - target.x_min_) / static_cast<double>(count - 1);
        for (std::size_t i = 0; i < count; ++i)
            nodes[i] = target.x_min_ + h * static_cast<double>(i);
        nodes.back() = target.x_max_;
    }

    std::vector<double> log_density(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double value =
            std::visit([&](const auto& p) { return p.log_xi(nodes[i]); }, target.payload_);
        if (!std::isfinite(value))
            throw std::runtime_error("normalize_and_tabulate: non-finite log density");
        log_density[i] = value;
    }

    // trapezoid normalizing constant on the same nodes
    const double h = (nodes.back() - nodes.front()) / static_cast<double>(nodes.size() - 1);
    CompensatedSum quad;
    quad.add(0.5 * std::exp(log_density.front()));
    quad.add(0.5 * std::exp(log_density.back()));
    for (std::size_t i = 1; i + 1 < nodes.size(); ++i) quad.add(std::exp(log_density[i]));
    const double norm = quad.value() * h;
    if (!(norm > 0.0) || !std::isfinite(norm))
        throw std::runtime_error("normalize_and_tabulate: target has zero or non-finite mass");

    target.table_ = StationaryTable(nodes, log_density);
    target.norm_const_ = norm;

    target.cdf_pairs_.clear();
    const auto& cum = target.table_.cumulative_mass();
    const double total = target.table_.total_mass();
    double last = -1.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double f = cum[i] / total;
        if (f > last) {
            target.cdf_pairs_.emplace_back(nodes[i], f);
            last = f;
        }
    }
    return target;
}

double phi_sq_integral(const MarginalTarget& target) {
    const auto* mala = std::get_if<MalaRoughPayload>(&target.payload());
    if (!mala) throw std::invalid_argument("phi_sq_integral: needs a mala_rough target");
    const double norm = target.norm_const();  // throws when unnormalized

    const GridSpec& grid = mala->path->grid();
    const double h = grid.spacing();
    CompensatedSum quad;
    for (std::size_t i = 0; i < grid.num_points(); ++i) {
        const double x = grid.node(i);
        const double phi = mala->phi(x);
        const double weight = (i == 0 || i + 1 == grid.num_points()) ? 0.5 : 1.0;
        quad.add(weight * phi * phi * std::exp(mala->log_xi(x)));
    }
    return quad.value() * h / norm;
}

}
