#include "sshstat/sandwich.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "sshstat/errors.hpp"

namespace sshstat {

std::vector<StratumEstimate> stratum_estimates(
    const std::vector<std::pair<std::string, double>>& samples,
    const StratumFrame& frame, bool fpc) {
    if (frame.strata.empty()) throw ValidationError("empty stratum frame");

    std::map<std::string, std::size_t> index;
    for (std::size_t h = 0; h < frame.strata.size(); ++h) {
        const auto& e = frame.strata[h];
        if (e.population == 0)
            throw ValidationError("stratum '" + e.label + "' has population 0");
        if (!index.emplace(e.label, h).second)
            throw ValidationError("duplicate stratum label '" + e.label + "'");
    }

    const std::size_t l = frame.strata.size();
    std::vector<std::size_t> n(l, 0);
    std::vector<double> sum(l, 0.0);
    for (const auto& [label, y] : samples) {
        const auto it = index.find(label);
        if (it == index.end())
            throw ValidationError("sample references unknown stratum '" + label + "'");
        if (!std::isfinite(y))
            throw ValidationError("non-finite sample value in stratum '" + label + "'");
        ++n[it->second];
        sum[it->second] += y;
    }
    for (std::size_t h = 0; h < l; ++h) {
        if (n[h] == 0)
            throw DegenerateDataError("unsampled stratum '" + frame.strata[h].label + "'");
        if (n[h] > frame.strata[h].population)
            throw ValidationError("stratum '" + frame.strata[h].label +
                                  "' has more samples than population");
    }

    std::vector<double> mean(l);
    for (std::size_t h = 0; h < l; ++h) mean[h] = sum[h] / static_cast<double>(n[h]);
    std::vector<double> ss(l, 0.0);
    for (const auto& [label, y] : samples) {
        const std::size_t h = index.at(label);
        const double d = y - mean[h];
        ss[h] += d * d;
    }

    std::vector<StratumEstimate> out(l);
    for (std::size_t h = 0; h < l; ++h) {
        StratumEstimate& e = out[h];
        e.label = frame.strata[h].label;
        e.n = n[h];
        e.population = frame.strata[h].population;
        e.mean = mean[h];
        if (n[h] >= 2) {
            double v = ss[h] / static_cast<double>(n[h] - 1) / static_cast<double>(n[h]);
            if (fpc)
                v *= 1.0 - static_cast<double>(n[h]) /
                               static_cast<double>(frame.strata[h].population);
            e.var_of_mean = std::max(v, 0.0);
        }
    }
    return out;
}

std::vector<SandwichEstimate> sandwich_map(const std::vector<StratumEstimate>& estimates,
                                           const OverlapSpec& overlaps) {
    if (overlaps.empty()) throw ValidationError("empty overlap specification");

    std::map<std::string, const StratumEstimate*> by_label;
    for (const auto& e : estimates)
        if (!by_label.emplace(e.label, &e).second)
            throw ValidationError("duplicate stratum estimate '" + e.label + "'");

    std::map<std::string, std::vector<const OverlapEntry*>> by_r;
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& o : overlaps) {
        if (!(o.weight >= 0.0) || !std::isfinite(o.weight))
            throw ValidationError("overlap weight for (" + o.r + "," + o.h +
                                  ") must be a finite value >= 0");
        if (by_label.find(o.h) == by_label.end())
            throw ValidationError("overlap references unknown stratum '" + o.h + "'");
        if (!seen.emplace(o.r, o.h).second)
            throw ValidationError("duplicate overlap entry (" + o.r + "," + o.h + ")");
        by_r[o.r].push_back(&o);
    }

    std::vector<SandwichEstimate> out;
    out.reserve(by_r.size());
    for (auto& [r, entries] : by_r) {
        double wsum = 0.0;
        for (const auto* o : entries) wsum += o->weight;
        if (std::fabs(wsum - 1.0) > 1e-9)
            throw ValidationError("overlap weights for reporting unit '" + r +
                                  "' sum to " + std::to_string(wsum) + ", expected 1");

        SandwichEstimate est;
        est.r = r;
        std::sort(entries.begin(), entries.end(),
                  [](const OverlapEntry* a, const OverlapEntry* b) { return a->h < b->h; });
        for (const auto* o : entries) {
            const StratumEstimate& se = *by_label.at(o->h);
            if (!se.var_of_mean)
                throw DegenerateDataError("stratum '" + o->h +
                                          "' has no variance estimate (single sample)");
            est.mean += o->weight * se.mean;
            est.variance += o->weight * o->weight * *se.var_of_mean;
            est.contributors.push_back({o->h, o->weight, se.mean, *se.var_of_mean});
        }
        out.push_back(std::move(est));
    }
    // std::map iteration already yields ascending r labels
    return out;
}

} // namespace sshstat
