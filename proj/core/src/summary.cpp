#include <algorithm>
#include <cmath>
#include <limits>

#include "leocdn/engine.hpp"
#include "leocdn/error.hpp"

namespace leocdn {
namespace {

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    double s = 0.0;
    for (const double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    return *mid;
}

}  // namespace

double bandwidth_ratio(std::span<const StepMetrics> series, std::span<const StepMetrics> baseline) {
    if (series.empty() || baseline.empty()) throw ValidationError("bandwidth ratio of an empty series");
    if (series.size() != baseline.size()) {
        throw ValidationError("series length " + std::to_string(series.size()) +
                              " does not match baseline length " + std::to_string(baseline.size()));
    }
    double used = 0.0;
    double base = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series[i].time != baseline[i].time) {
            throw ValidationError("series and baseline disagree on step times");
        }
        used += static_cast<double>(series[i].request_bytes + series[i].propagation_bytes);
        base += static_cast<double>(baseline[i].request_bytes);
    }
    if (base == 0.0) throw ValidationError("baseline carries no bytes");
    return used / base;
}

std::optional<double> detect_spike_period(std::span<const double> values, double step) {
    if (values.size() < 3) return std::nullopt;
    const double med = median_of({values.begin(), values.end()});
    const double top = *std::max_element(values.begin(), values.end());
    if (!(top > 1.5 * med)) return std::nullopt;
    const double threshold = 0.5 * (med + top);

    std::vector<std::size_t> starts;
    bool above = false;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const bool now = values[i] > threshold;
        if (now && !above) starts.push_back(i);
        above = now;
    }
    if (starts.size() < 2) return std::nullopt;
    return step * static_cast<double>(starts.back() - starts.front()) /
           static_cast<double>(starts.size() - 1);
}

SummaryReport summarize(std::span<const StepMetrics> series, const SummaryOptions& options,
                        std::span<const StepMetrics> baseline) {
    if (series.empty()) throw ValidationError("cannot summarize an empty series");
    SummaryReport r;
    r.strategy = options.strategy;
    r.seed = options.seed;
    r.zipf_exponent = options.zipf_exponent;
    r.warmup = options.warmup;
    r.steps = series.size();
    r.epoch_interval = options.epoch_interval;

    std::vector<double> hops, hit, storage, nonempty, epoch_hops, other_hops, all_hops;
    for (const auto& m : series) {
        r.total_request_bytes += m.request_bytes;
        r.total_propagation_bytes += m.propagation_bytes;
        all_hops.push_back(m.avg_hops);
        if (m.time < options.warmup) continue;
        hops.push_back(m.avg_hops);
        hit.push_back(m.hit_ratio);
        storage.push_back(m.avg_storage_all_pops);
        nonempty.push_back(static_cast<double>(m.nonempty_pop_count));
        if (options.epoch_interval > 0.0 && epoch_in_step(m.time, options.step, options.epoch_interval)) {
            epoch_hops.push_back(m.avg_hops);
        } else {
            other_hops.push_back(m.avg_hops);
        }
    }
    r.steps_after_warmup = hops.size();
    r.mean_hops = mean_of(hops);
    r.mean_hit_ratio = mean_of(hit);
    r.mean_storage_bytes = mean_of(storage);
    r.mean_nonempty_pops = mean_of(nonempty);
    r.final_nonempty_pops = series.back().nonempty_pop_count;
    r.epoch_mean_hops = mean_of(epoch_hops);
    r.non_epoch_mean_hops = mean_of(other_hops);
    r.epoch_hop_ratio = r.epoch_mean_hops / r.non_epoch_mean_hops;

    for (const auto& m : series) {
        if (m.hit_ratio >= 0.99) {
            r.time_to_99_first = m.time;
            break;
        }
    }
    for (std::size_t i = series.size(); i-- > 0;) {
        if (series[i].hit_ratio < 0.99) break;
        r.time_to_99_sustained = series[i].time;
    }

    r.spike_period = detect_spike_period(all_hops, options.step);
    if (!baseline.empty()) r.bandwidth_ratio = bandwidth_ratio(series, baseline);
    return r;
}

}  // namespace leocdn
