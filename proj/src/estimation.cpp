#include "motility/estimation.hpp"

#include "motility/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>

namespace motility {

PeakFit fit_peak(std::span<SweepRecord const> records)
{
    std::set<double> distinct;
    for (SweepRecord const& r : records) {
        distinct.insert(r.b_mt);
    }
    if (distinct.size() < 3) {
        throw TooFewPoints("peak fit needs at least 3 distinct B values, got " +
                           std::to_string(distinct.size()));
    }

    bool const weighted = std::all_of(records.begin(), records.end(), [](SweepRecord const& r) {
        return r.stderr_nm2 > 0 && std::isfinite(r.stderr_nm2);
    });

    // Centre and scale B so the normal matrix stays well conditioned.
    double const b_lo = *distinct.begin();
    double const b_hi = *distinct.rbegin();
    double const centre = 0.5 * (b_lo + b_hi);
    double const scale = 0.5 * (b_hi - b_lo);

    auto const n = static_cast<Eigen::Index>(records.size());
    Eigen::MatrixXd design(n, 3);
    Eigen::VectorXd target(n);
    double intensity_scale = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        SweepRecord const& r = records[static_cast<std::size_t>(i)];
        double const w = weighted ? 1.0 / r.stderr_nm2 : 1.0;
        double const u = (r.b_mt - centre) / scale;
        design(i, 0) = w;
        design(i, 1) = w * u;
        design(i, 2) = w * u * u;
        target(i) = w * r.intensity_nm2;
        intensity_scale = std::max(intensity_scale, std::abs(r.intensity_nm2));
    }

    Eigen::Vector3d const c = design.colPivHouseholderQr().solve(target);

    // Back to I = α + βB + γB² in unscaled mT.
    double const a0 = c(0);
    double const a1 = c(1) / scale;
    double const a2 = c(2) / (scale * scale);

    PeakFit fit;
    fit.gamma = a2;
    fit.beta = a1 - 2.0 * a2 * centre;
    fit.alpha = a0 - a1 * centre + a2 * centre * centre;

    double sum_sq = 0;
    for (SweepRecord const& r : records) {
        double const e = r.intensity_nm2 - (fit.alpha + fit.beta * r.b_mt + fit.gamma * r.b_mt * r.b_mt);
        sum_sq += e * e;
    }
    fit.residual_nm2 = std::sqrt(sum_sq / static_cast<double>(records.size()));

    // Curvature in scaled units compared against the data magnitude, so
    // rounding noise on an exactly linear input is not taken as concave.
    if (!(c(2) < -1.0e-9 * std::max(intensity_scale, std::numeric_limits<double>::min()))) {
        throw NotConcave("fitted curvature is not negative; no interior maximum");
    }

    double const vertex_u = -c(1) / (2.0 * c(2));
    fit.b_star_mt = centre + scale * vertex_u;
    if (!(fit.b_star_mt > 0)) {
        throw NotConcave("fitted maximum lies at B <= 0 mT");
    }
    fit.m_hat_a_per_m = dipole_density_from_peak(to_tesla(MilliTesla{fit.b_star_mt})).value();
    return fit;
}

std::vector<AnglePoint> angle_profile(std::span<SweepRecord const> records, double bin_deg)
{
    if (!(bin_deg > 0)) {
        throw Error("angle bin width must be positive");
    }

    struct Accumulator
    {
        double theta = 0;
        double intensity = 0;
        double var = 0;
        int count = 0;
    };
    std::map<long long, Accumulator> bins;
    for (SweepRecord const& r : records) {
        auto const key = static_cast<long long>(std::floor(r.theta_deg / bin_deg + 0.5));
        Accumulator& acc = bins[key];
        acc.theta += r.theta_deg;
        acc.intensity += r.intensity_nm2;
        acc.var += r.stderr_nm2 * r.stderr_nm2;
        ++acc.count;
    }

    std::vector<AnglePoint> profile;
    profile.reserve(bins.size());
    for (auto const& [key, acc] : bins) {
        double const n = acc.count;
        profile.push_back({acc.theta / n, acc.intensity / n, std::sqrt(acc.var) / n, acc.count});
    }
    return profile;
}

PeakReport report(PeakFit const& fit, MonomerGeometry const& geometry)
{
    auto const m = dipole_density_from_peak(to_tesla(MilliTesla{fit.b_star_mt}));
    auto const moment = monomer_moment(m, geometry);
    return {
        fit.b_star_mt,
        m.value(),
        moment.moment.value(),
        moment.bohr_magnetons,
        dipole_interaction_energy(m, geometry).value(),
    };
}

} // namespace motility
