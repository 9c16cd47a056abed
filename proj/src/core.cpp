#include "sshstat/core.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "sshstat/errors.hpp"

namespace sshstat {

Dataset::Dataset(std::vector<std::string> ids, std::vector<double> y)
    : ids_(std::move(ids)), y_(std::move(y)) {
    if (ids_.empty()) throw ValidationError("dataset must contain at least one unit");
    if (ids_.size() != y_.size())
        throw ValidationError("dataset: id and y columns differ in length");
    std::unordered_set<std::string> seen;
    seen.reserve(ids_.size() * 2);
    for (std::size_t i = 0; i < ids_.size(); ++i) {
        if (!seen.insert(ids_[i]).second)
            throw ValidationError("duplicate unit id '" + ids_[i] + "'");
        if (!std::isfinite(y_[i]))
            throw ValidationError("non-finite y for unit '" + ids_[i] + "'");
    }
}

Dataset Dataset::from_records(const std::vector<UnitRecord>& records) {
    std::vector<std::string> ids;
    std::vector<double> y;
    ids.reserve(records.size());
    y.reserve(records.size());
    for (const auto& r : records) {
        ids.push_back(r.unit_id);
        y.push_back(r.y);
    }
    Dataset d(std::move(ids), std::move(y));

    // Collect covariate names in first-appearance order; a name present on
    // one record must be present on all of them.
    std::vector<std::string> names;
    for (const auto& r : records)
        for (const auto& [name, value] : r.covariates)
            if (std::find(names.begin(), names.end(), name) == names.end())
                names.push_back(name);
    for (const auto& name : names) {
        Covariate cov;
        cov.name = name;
        bool numeric = true;
        for (const auto& r : records) {
            auto it = r.covariates.find(name);
            if (it == r.covariates.end())
                throw ValidationError("record '" + r.unit_id + "' lacks covariate '" + name + "'");
            if (!std::holds_alternative<double>(it->second)) numeric = false;
        }
        cov.kind = numeric ? CovariateKind::continuous : CovariateKind::categorical;
        for (const auto& r : records) {
            const auto& v = r.covariates.at(name);
            if (numeric) {
                cov.values.push_back(std::get<double>(v));
            } else if (std::holds_alternative<std::string>(v)) {
                cov.labels.push_back(std::get<std::string>(v));
            } else {
                // mixed column: render numbers as text
                cov.labels.push_back(std::to_string(std::get<double>(v)));
            }
        }
        d.add_covariate(std::move(cov));
    }
    return d;
}

void Dataset::add_covariate(Covariate cov) {
    const std::size_t len =
        cov.kind == CovariateKind::continuous ? cov.values.size() : cov.labels.size();
    if (len != n())
        throw ValidationError("covariate '" + cov.name + "' has " + std::to_string(len) +
                              " entries, expected " + std::to_string(n()));
    if (find_covariate(cov.name) != nullptr)
        throw ValidationError("duplicate covariate '" + cov.name + "'");
    covariates_.push_back(std::move(cov));
}

const Covariate* Dataset::find_covariate(const std::string& name) const {
    for (const auto& c : covariates_)
        if (c.name == name) return &c;
    return nullptr;
}

const Covariate& Dataset::covariate(const std::string& name) const {
    const Covariate* c = find_covariate(name);
    if (!c) throw ValidationError("no covariate named '" + name + "'");
    return *c;
}

UnitRecord Dataset::record(std::size_t pos) const {
    UnitRecord r;
    r.unit_id = ids_[pos];
    r.y = y_[pos];
    for (const auto& c : covariates_) {
        if (c.kind == CovariateKind::continuous)
            r.covariates[c.name] = c.values[pos];
        else
            r.covariates[c.name] = c.labels[pos];
    }
    return r;
}

Partition Partition::from_parts(std::vector<std::string> unit_ids,
                                std::vector<std::uint32_t> stratum_of,
                                std::vector<std::string> strata) {
    Partition p;
    p.unit_ids_ = std::move(unit_ids);
    p.stratum_of_ = std::move(stratum_of);
    p.strata_ = std::move(strata);
    if (p.unit_ids_.empty()) throw ValidationError("partition must cover at least one unit");
    if (p.unit_ids_.size() != p.stratum_of_.size())
        throw ValidationError("partition: id/stratum vectors differ in length");
    p.sizes_.assign(p.strata_.size(), 0);
    for (std::uint32_t s : p.stratum_of_) {
        if (s >= p.strata_.size()) throw ValidationError("partition: stratum index out of range");
        ++p.sizes_[s];
    }
    for (std::size_t h = 0; h < p.sizes_.size(); ++h)
        if (p.sizes_[h] == 0)
            throw ValidationError("empty stratum '" + p.strata_[h] + "'");
    return p;
}

Partition build_partition(const std::vector<Assignment>& assignments) {
    if (assignments.empty()) throw ValidationError("empty assignment list");
    std::vector<std::string> ids;
    std::vector<std::uint32_t> idx;
    std::vector<std::string> strata;
    ids.reserve(assignments.size());
    idx.reserve(assignments.size());
    std::unordered_map<std::string, std::uint32_t> label_index;
    std::unordered_set<std::string> seen_ids;
    seen_ids.reserve(assignments.size() * 2);
    for (const auto& [id, label] : assignments) {
        if (!seen_ids.insert(id).second) throw ValidationError("duplicate unit '" + id + "'");
        auto [it, inserted] =
            label_index.emplace(label, static_cast<std::uint32_t>(strata.size()));
        if (inserted) strata.push_back(label);
        ids.push_back(id);
        idx.push_back(it->second);
    }
    return Partition::from_parts(std::move(ids), std::move(idx), std::move(strata));
}

Partition build_partition(const Dataset& data, const std::vector<Assignment>& assignments) {
    if (assignments.empty()) throw ValidationError("empty assignment list");
    std::unordered_map<std::string, std::string> label_of;
    label_of.reserve(assignments.size() * 2);
    for (const auto& [id, label] : assignments)
        if (!label_of.emplace(id, label).second)
            throw ValidationError("duplicate unit '" + id + "'");
    if (label_of.size() != data.n())
        throw ValidationError("assignments cover " + std::to_string(label_of.size()) +
                              " units, dataset has " + std::to_string(data.n()));
    std::vector<Assignment> ordered;
    ordered.reserve(data.n());
    for (const auto& id : data.ids()) {
        auto it = label_of.find(id);
        if (it == label_of.end()) throw ValidationError("missing unit '" + id + "'");
        ordered.emplace_back(id, it->second);
    }
    return build_partition(ordered);
}

Partition partition_from_labels(const std::vector<std::string>& ids,
                                const std::vector<std::string>& labels) {
    if (ids.size() != labels.size())
        throw ValidationError("id and label vectors differ in length");
    std::vector<Assignment> a;
    a.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) a.emplace_back(ids[i], labels[i]);
    return build_partition(a);
}

std::vector<std::uint32_t> align_to(const Partition& p1, const Partition& p2) {
    if (p1.n() != p2.n()) throw ValidationError("unit-set mismatch: partition sizes differ");
    if (p1.unit_ids() == p2.unit_ids()) return p2.stratum_indices();
    std::unordered_map<std::string, std::uint32_t> by_id;
    by_id.reserve(p2.n() * 2);
    for (std::size_t i = 0; i < p2.n(); ++i) by_id.emplace(p2.unit_ids()[i], p2.stratum_of(i));
    std::vector<std::uint32_t> out(p1.n());
    for (std::size_t i = 0; i < p1.n(); ++i) {
        auto it = by_id.find(p1.unit_ids()[i]);
        if (it == by_id.end())
            throw ValidationError("unit-set mismatch: '" + p1.unit_ids()[i] +
                                  "' missing from second partition");
        out[i] = it->second;
    }
    return out;
}

CrossTab cross_tabulate(const Partition& p1, const Partition& p2) {
    const auto idx2 = align_to(p1, p2);
    CrossTab ct;
    ct.counts.assign(p1.l(), std::vector<std::size_t>(p2.l(), 0));
    for (std::size_t i = 0; i < p1.n(); ++i) ++ct.counts[p1.stratum_of(i)][idx2[i]];
    ct.row_sizes = p1.sizes();
    ct.col_sizes.assign(p2.l(), 0);
    for (std::size_t k = 0; k < p2.l(); ++k)
        for (std::size_t h = 0; h < p1.l(); ++h) ct.col_sizes[k] += ct.counts[h][k];
    return ct;
}

Partition overlay(const Partition& p1, const Partition& p2) {
    const auto idx2 = align_to(p1, p2);
    std::vector<std::string> strata;
    std::vector<std::uint32_t> idx(p1.n());
    // cell key = h * L2 + k
    std::unordered_map<std::uint64_t, std::uint32_t> cell_index;
    for (std::size_t i = 0; i < p1.n(); ++i) {
        const std::uint64_t key =
            static_cast<std::uint64_t>(p1.stratum_of(i)) * p2.l() + idx2[i];
        auto [it, inserted] = cell_index.emplace(key, static_cast<std::uint32_t>(strata.size()));
        if (inserted)
            strata.push_back(p1.strata()[p1.stratum_of(i)] + "&" + p2.strata()[idx2[i]]);
        idx[i] = it->second;
    }
    return Partition::from_parts(p1.unit_ids(), std::move(idx), std::move(strata));
}

std::vector<double> align_y(const Dataset& data, const Partition& p) {
    if (data.n() != p.n()) throw ValidationError("unit-set mismatch: dataset vs partition");
    if (data.ids() == p.unit_ids()) return data.y();
    std::unordered_map<std::string, std::size_t> pos;
    pos.reserve(data.n() * 2);
    for (std::size_t i = 0; i < data.n(); ++i) pos.emplace(data.ids()[i], i);
    std::vector<double> out(p.n());
    for (std::size_t i = 0; i < p.n(); ++i) {
        auto it = pos.find(p.unit_ids()[i]);
        if (it == pos.end())
            throw ValidationError("unit-set mismatch: '" + p.unit_ids()[i] + "' not in dataset");
        out[i] = data.y()[it->second];
    }
    return out;
}

} // namespace sshstat
