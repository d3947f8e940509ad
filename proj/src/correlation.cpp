#include "motility/correlation.hpp"

#include "motility/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace motility {

namespace {

void check_lag(int max_lag, int window)
{
    if (max_lag < 0 || max_lag >= window) {
        throw LagTooLarge("max lag " + std::to_string(max_lag) + " must lie in [0, window " +
                          std::to_string(window) + ")");
    }
}

double mean_of(std::span<double const> x)
{
    double sum = 0;
    for (double v : x) {
        sum += v;
    }
    return sum / static_cast<double>(x.size());
}

struct Aligned
{
    std::vector<double> a;
    std::vector<double> b;
    std::vector<std::size_t> run_starts; // index into a/b where a gap-free run begins
};

Aligned align(DisplacementSeries const& a, DisplacementSeries const& b)
{
    Aligned out;
    std::size_t i = 0;
    std::size_t j = 0;
    FrameIndex previous = 0;
    while (i < a.samples.size() && j < b.samples.size()) {
        FrameIndex const fa = a.samples[i].frame;
        FrameIndex const fb = b.samples[j].frame;
        if (fa < fb) {
            ++i;
        } else if (fb < fa) {
            ++j;
        } else {
            if (out.a.empty() || fa != previous + 1) {
                out.run_starts.push_back(out.a.size());
            }
            out.a.push_back(a.samples[i].parallel);
            out.b.push_back(b.samples[j].parallel);
            previous = fa;
            ++i;
            ++j;
        }
    }
    return out;
}

CorrelationFunction correlate_runs(std::span<double const> a, std::span<double const> b,
                                   std::span<std::size_t const> run_starts, int max_lag,
                                   int window, FrameClock const& clock)
{
    check_lag(max_lag, window);

    auto const width = static_cast<std::size_t>(window);
    std::size_t const lag_count = 2 * static_cast<std::size_t>(max_lag) + 1;
    std::vector<double> sum(lag_count, 0.0);
    std::vector<double> sum_sq(lag_count, 0.0);

    CorrelationFunction out;
    out.window = frames_to_seconds(window, clock);
    out.window_frames = window;

    for (std::size_t r = 0; r < run_starts.size(); ++r) {
        std::size_t const run_end = r + 1 < run_starts.size() ? run_starts[r + 1] : a.size();
        for (std::size_t start = run_starts[r]; start + width <= run_end; start += width) {
            auto const c = window_correlation(a.subspan(start, width), b.subspan(start, width), max_lag);
            for (std::size_t k = 0; k < lag_count; ++k) {
                sum[k] += c[k];
                sum_sq[k] += c[k] * c[k];
            }
            out.window_intensities.push_back(c[static_cast<std::size_t>(max_lag)]);
            ++out.n_windows;
        }
    }

    if (out.n_windows == 0) {
        throw InsufficientOverlap("no gap-free stretch of " + std::to_string(window) +
                                  " aligned frames");
    }

    double const n = out.n_windows;
    out.lags.reserve(lag_count);
    for (std::size_t k = 0; k < lag_count; ++k) {
        int const lag = static_cast<int>(k) - max_lag;
        double const mean = sum[k] / n;
        double se = 0;
        if (out.n_windows > 1) {
            double const var = std::max(0.0, (sum_sq[k] - n * mean * mean) / (n - 1));
            se = std::sqrt(var / n);
        }
        out.lags.push_back({lag, frames_to_seconds(lag, clock).value(), mean, se});
    }
    return out;
}

} // namespace

LagValue const& CorrelationFunction::at_lag(int lag) const
{
    int const max_lag = static_cast<int>(lags.size() / 2);
    if (lag < -max_lag || lag > max_lag) {
        throw LagTooLarge("lag " + std::to_string(lag) + " outside computed range");
    }
    return lags[static_cast<std::size_t>(lag + max_lag)];
}

std::vector<double> window_correlation(std::span<double const> a, std::span<double const> b,
                                       int max_lag)
{
    if (a.size() != b.size() || a.empty()) {
        throw InsufficientOverlap("window correlation needs two equally long, non-empty spans");
    }
    auto const n = static_cast<int>(a.size());
    check_lag(max_lag, n);

    double const mean_a = mean_of(a);
    double const mean_b = mean_of(b);
    std::vector<double> da(a.size());
    std::vector<double> db(b.size());
    for (std::size_t t = 0; t < a.size(); ++t) {
        da[t] = a[t] - mean_a;
        db[t] = b[t] - mean_b;
    }

    std::vector<double> c;
    c.reserve(2 * static_cast<std::size_t>(max_lag) + 1);
    for (int lag = -max_lag; lag <= max_lag; ++lag) {
        int const first = lag < 0 ? -lag : 0;
        int const last = lag < 0 ? n : n - lag; // exclusive
        double sum = 0;
        for (int t = first; t < last; ++t) {
            sum += da[static_cast<std::size_t>(t)] * db[static_cast<std::size_t>(t + lag)];
        }
        c.push_back(sum / static_cast<double>(n - std::abs(lag)));
    }
    return c;
}

CorrelationFunction cross_correlation(DisplacementSeries const& a, DisplacementSeries const& b,
                                      int max_lag, int window, FrameClock const& clock)
{
    check_lag(max_lag, window);
    Aligned const aligned = align(a, b);
    auto out = correlate_runs(aligned.a, aligned.b, aligned.run_starts, max_lag, window, clock);
    out.pair = {a.marker_id, b.marker_id};
    return out;
}

CorrelationFunction auto_correlation(DisplacementSeries const& a, int max_lag, int window,
                                     FrameClock const& clock)
{
    return cross_correlation(a, a, max_lag, window, clock);
}

double intensity(DisplacementSeries const& a, DisplacementSeries const& b, int window)
{
    return cross_correlation(a, b, 0, window).zero_lag();
}

CorrelationFunction cross_correlation(std::span<double const> a, std::span<double const> b,
                                      int max_lag, int window, FrameClock const& clock)
{
    if (a.size() != b.size()) {
        throw InsufficientOverlap("series lengths differ");
    }
    std::size_t const start = 0;
    return correlate_runs(a, b, std::span<std::size_t const>(&start, 1), max_lag, window, clock);
}

} // namespace motility
