#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace sshstat {

using CovariateValue = std::variant<double, std::string>;

/// One observation unit: an opaque id, the attribute value y, and any
/// number of named covariates (numeric or categorical).
struct UnitRecord {
    std::string unit_id;
    double y = 0.0;
    std::map<std::string, CovariateValue> covariates;
};

enum class CovariateKind { continuous, categorical };

/// Column storage for one covariate. Exactly one of `values`/`labels` is
/// populated, matching `kind`.
struct Covariate {
    std::string name;
    CovariateKind kind = CovariateKind::continuous;
    std::vector<double> values;
    std::vector<std::string> labels;
};

/// Immutable collection of N units in stable input order. Unit ids are
/// unique and every y is finite; both are enforced at construction.
class Dataset {
public:
    Dataset(std::vector<std::string> ids, std::vector<double> y);

    static Dataset from_records(const std::vector<UnitRecord>& records);

    /// Attach a covariate column (must have exactly n() entries).
    void add_covariate(Covariate cov);

    std::size_t n() const { return ids_.size(); }
    const std::vector<std::string>& ids() const { return ids_; }
    const std::vector<double>& y() const { return y_; }
    const std::vector<Covariate>& covariates() const { return covariates_; }

    /// Throws ValidationError if no covariate has that name.
    const Covariate& covariate(const std::string& name) const;
    const Covariate* find_covariate(const std::string& name) const;

    UnitRecord record(std::size_t pos) const;

private:
    std::vector<std::string> ids_;
    std::vector<double> y_;
    std::vector<Covariate> covariates_;
};

/// An assignment of every unit to exactly one of L non-empty strata.
/// Stratum labels are opaque; their order is first appearance in the
/// construction sequence. Immutable after construction.
class Partition {
public:
    std::size_t n() const { return unit_ids_.size(); }
    std::size_t l() const { return strata_.size(); }
    const std::vector<std::string>& unit_ids() const { return unit_ids_; }
    const std::vector<std::string>& strata() const { return strata_; }
    const std::vector<std::size_t>& sizes() const { return sizes_; }

    /// Stratum index (into strata()/sizes()) of the unit at `pos`.
    std::uint32_t stratum_of(std::size_t pos) const { return stratum_of_[pos]; }
    const std::vector<std::uint32_t>& stratum_indices() const { return stratum_of_; }
    const std::string& label_of(std::size_t pos) const { return strata_[stratum_of_[pos]]; }

    static Partition from_parts(std::vector<std::string> unit_ids,
                                std::vector<std::uint32_t> stratum_of,
                                std::vector<std::string> strata);

private:
    Partition() = default;

    std::vector<std::string> unit_ids_;
    std::vector<std::uint32_t> stratum_of_;
    std::vector<std::string> strata_;
    std::vector<std::size_t> sizes_;
};

using Assignment = std::pair<std::string, std::string>; // (unit_id, stratum label)

/// Build a partition from (unit_id, label) pairs. Unit order is the input
/// order; strata are ordered by first appearance.
Partition build_partition(const std::vector<Assignment>& assignments);

/// As above, but validates that the assignments cover the dataset's unit
/// set exactly, and reorders units to dataset order.
Partition build_partition(const Dataset& data, const std::vector<Assignment>& assignments);

/// Convenience: parallel id/label vectors (e.g. a categorical column).
Partition partition_from_labels(const std::vector<std::string>& ids,
                                const std::vector<std::string>& labels);

/// Stratum-overlap counts n_hk between two partitions of the same units.
struct CrossTab {
    std::vector<std::vector<std::size_t>> counts; // L1 x L2
    std::vector<std::size_t> row_sizes;           // N_h under p1
    std::vector<std::size_t> col_sizes;           // M_k under p2
};

/// For each unit position of p1, the stratum index that unit has under p2.
/// Throws ValidationError if the unit sets differ.
std::vector<std::uint32_t> align_to(const Partition& p1, const Partition& p2);

CrossTab cross_tabulate(const Partition& p1, const Partition& p2);

/// Product partition: strata are the non-empty (h, k) cells, labelled
/// "<h>&<k>", ordered by first appearance over p1's unit order.
Partition overlay(const Partition& p1, const Partition& p2);

/// y values of `data` reordered to p's unit order (id join).
/// Throws ValidationError if the unit sets differ.
std::vector<double> align_y(const Dataset& data, const Partition& p);

} // namespace sshstat
