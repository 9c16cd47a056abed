#include "sshstat/cli/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <span>
#include <stdexcept>
#include <unordered_set>
#include <utility>

#include "sshstat/cli/csv.hpp"
#include "sshstat/cli/report.hpp"
#include "sshstat/cli/svg.hpp"
#include "sshstat/compare.hpp"
#include "sshstat/detect.hpp"
#include "sshstat/errors.hpp"
#include "sshstat/qstat.hpp"
#include "sshstat/sandwich.hpp"
#include "sshstat/stratify.hpp"
#include "sshstat/synth.hpp"

namespace sshstat::cli {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw ValidationError(msg);
}

TestMode parse_test_mode(const std::string& s) {
    if (s == "central") return TestMode::central_null;
    if (s == "noncentral") return TestMode::noncentral_plugin;
    throw ValidationError("unknown mode '" + s + "' (expected central | noncentral)");
}

Alternative parse_alternative(const std::string& s) {
    if (s == "two-sided") return Alternative::two_sided;
    if (s == "greater") return Alternative::greater;
    if (s == "less") return Alternative::less;
    throw ValidationError("unknown alternative '" + s +
                          "' (expected two-sided | greater | less)");
}

BreakMethod parse_method(const std::string& s) {
    if (s == "quantile") return BreakMethod::quantile;
    if (s == "equal") return BreakMethod::equal_interval;
    if (s == "optimal") return BreakMethod::optimal_dp;
    throw ValidationError("unknown method '" + s +
                          "' (expected quantile | equal | optimal)");
}

const char* mode_name(TestMode m) {
    return m == TestMode::central_null ? "central" : "noncentral";
}

const char* alternative_name(Alternative a) {
    switch (a) {
        case Alternative::two_sided: return "two-sided";
        case Alternative::greater: return "greater";
        case Alternative::less: return "less";
    }
    throw std::logic_error("unmapped alternative");
}

const char* category_name(InteractionCategory c) {
    switch (c) {
        case InteractionCategory::weaken_nonlinear: return "weaken_nonlinear";
        case InteractionCategory::weaken_univariate: return "weaken_univariate";
        case InteractionCategory::enhance_bivariate: return "enhance_bivariate";
        case InteractionCategory::independent: return "independent";
        case InteractionCategory::enhance_nonlinear: return "enhance_nonlinear";
    }
    throw std::logic_error("unmapped interaction category");
}

const char* kind_name(CovariateKind k) {
    return k == CovariateKind::categorical ? "categorical" : "continuous";
}

// ---- input loading ----

enum class Want { categorical, continuous, automatic };

struct ColumnRequest {
    std::string name;
    Want want;
};

/// Schema = the user's forced types first (they win the dedup in
/// ingest_csv), then the subcommand's role columns. Contradictions between
/// a role's required kind and a forced type are rejected here.
Dataset load_dataset(const RunConfig& cfg, const std::vector<ColumnRequest>& requests) {
    require(!cfg.input.empty(), "--input is required");
    const std::unordered_set<std::string> as_cat(cfg.categorical.begin(), cfg.categorical.end());
    const std::unordered_set<std::string> as_num(cfg.continuous.begin(), cfg.continuous.end());
    for (const std::string& name : cfg.categorical)
        require(as_num.count(name) == 0,
                "column '" + name + "' declared both categorical and continuous");

    CsvSchema schema;
    schema.id_column = cfg.id_column;
    schema.y_column = cfg.y_column;
    for (const std::string& name : cfg.categorical)
        schema.declared.emplace_back(name, CovariateKind::categorical);
    for (const std::string& name : cfg.continuous)
        schema.declared.emplace_back(name, CovariateKind::continuous);
    for (const ColumnRequest& req : requests) {
        switch (req.want) {
            case Want::categorical:
                require(as_num.count(req.name) == 0, "column '" + req.name +
                        "' is used as a stratum and must be categorical");
                schema.declared.emplace_back(req.name, CovariateKind::categorical);
                break;
            case Want::continuous:
                require(as_cat.count(req.name) == 0,
                        "column '" + req.name + "' must be continuous");
                schema.declared.emplace_back(req.name, CovariateKind::continuous);
                break;
            case Want::automatic:
                schema.auto_columns.push_back(req.name);
                break;
        }
    }
    return ingest_csv(cfg.input, schema);
}

Partition stratum_partition(const Dataset& data, const std::string& column) {
    const Covariate& cov = data.covariate(column);
    if (cov.kind != CovariateKind::categorical)
        throw ValidationError("stratum column '" + column + "' must be categorical");
    return partition_from_labels(data.ids(), cov.labels);
}

const std::vector<double>& x_values(const Dataset& data, const std::string& column) {
    const Covariate& cov = data.covariate(column);
    if (cov.kind != CovariateKind::continuous)
        throw ValidationError("column '" + column + "' is not numeric");
    return cov.values;
}

// ---- report plumbing ----

void write_json_report(const RunConfig& cfg, json config, json result) {
    json envelope = report_envelope(cfg.subcommand, std::move(config));
    envelope["result"] = std::move(result);
    write_text(cfg.out, envelope.dump(2) + "\n");
}

json base_config(const RunConfig& cfg) {
    json j;
    j["input"] = cfg.input;
    j["id_column"] = cfg.id_column;
    j["y_column"] = cfg.y_column;
    return j;
}

json opt_num(const std::optional<double>& v) {
    return v ? num(*v) : json(nullptr);
}

void require_json_format(const RunConfig& cfg) {
    require(cfg.format == "json",
            "subcommand '" + cfg.subcommand + "' only supports --format json");
}

// ---- subcommands ----

void run_q(const RunConfig& cfg) {
    require_json_format(cfg);
    require(!cfg.stratum.empty(), "q requires --stratum");
    const TestMode mode = parse_test_mode(cfg.mode);

    const Dataset data = load_dataset(cfg, {{cfg.stratum, Want::categorical}});
    const Partition p = stratum_partition(data, cfg.stratum);
    const QResult res = q_test(data.y(), p, mode);
    const Decomposition dec = decompose(data.y(), p);
    const std::vector<StratumStats> profile = stratum_profile(data.y(), p);

    json config = base_config(cfg);
    config["stratum"] = cfg.stratum;
    config["mode"] = cfg.mode;
    config["seed"] = cfg.seed;

    json result;
    result["n"] = dec.n;
    result["l"] = dec.l;
    result["q"] = num(res.q);
    result["f_stat"] = num(res.f_stat);
    result["df1"] = res.df1;
    result["df2"] = res.df2;
    result["lambda"] = num(res.lambda);
    result["mode"] = mode_name(res.mode);
    result["p_value"] = num(res.p_value);
    json d;
    d["sst"] = num(dec.sst);
    d["ssb"] = num(dec.ssb);
    d["ssw"] = num(dec.ssw);
    d["grand_mean"] = num(dec.grand_mean);
    d["sigma2_hat"] = opt_num(dec.sigma2_hat);
    result["decomposition"] = std::move(d);
    json strata = json::array();
    for (const StratumStats& s : profile) {
        json row;
        row["label"] = s.label;
        row["n"] = s.n_h;
        row["weight"] = num(s.weight);
        row["mean"] = num(s.mean);
        row["var_within"] = num(s.var_within);
        row["q_h"] = num(s.q_h);
        strata.push_back(std::move(row));
    }
    result["strata"] = std::move(strata);
    write_json_report(cfg, std::move(config), std::move(result));
}

void run_compare(const RunConfig& cfg) {
    require_json_format(cfg);
    require(!cfg.stratum.empty() && !cfg.stratum2.empty(),
            "compare requires --stratum and --stratum2");
    const Alternative alt = parse_alternative(cfg.alternative);

    const Dataset data = load_dataset(
        cfg, {{cfg.stratum, Want::categorical}, {cfg.stratum2, Want::categorical}});
    const Partition p1 = stratum_partition(data, cfg.stratum);
    const Partition p2 = stratum_partition(data, cfg.stratum2);
    const CompareResult res = compare_test(data.y(), p1, p2, alt);

    json config = base_config(cfg);
    config["stratum"] = cfg.stratum;
    config["stratum2"] = cfg.stratum2;
    config["alternative"] = alternative_name(alt);
    config["seed"] = cfg.seed;

    json result;
    result["n"] = data.n();
    result["l1"] = p1.l();
    result["l2"] = p2.l();
    result["q1"] = num(res.q1);
    result["q2"] = num(res.q2);
    result["big_q"] = num(res.big_q);
    result["d_stat"] = num(res.d_stat);
    result["sigma2_hat"] = num(res.sigma2_hat);
    json tr;
    tr["tr_diff"] = num(res.traces.tr_diff);
    tr["tr_a1a2"] = num(res.traces.tr_a1a2);
    tr["tr_diff_sq"] = num(res.traces.tr_diff_sq);
    tr["quad_mean_diff"] = num(res.traces.quad_mean_diff);
    tr["quad_mean_diff_sq"] = num(res.traces.quad_mean_diff_sq);
    result["traces"] = std::move(tr);
    result["e_d"] = num(res.e_d);
    result["v_d"] = num(res.v_d);
    result["z"] = num(res.z);
    result["p_value"] = num(res.p_value);
    result["alternative"] = alternative_name(res.alternative);
    write_json_report(cfg, std::move(config), std::move(result));
}

json scan_rows_json(const ScanResult& scan) {
    json rows = json::array();
    for (const ScanRow& r : scan.rows) {
        json row;
        row["l"] = r.l;
        row["q"] = num(r.q);
        row["p_value"] = num(r.p_value);
        row["delta_q"] = opt_num(r.delta_q);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string scan_rows_csv(const ScanResult& scan) {
    std::string csv = "l,q,p_value,delta_q\n";
    for (const ScanRow& r : scan.rows) {
        csv += std::to_string(r.l);
        csv += ',';
        csv += fmt_num(r.q);
        csv += ',';
        csv += fmt_num(r.p_value);
        csv += ',';
        if (r.delta_q) csv += fmt_num(*r.delta_q);
        csv += '\n';
    }
    return csv;
}

void run_stratify(const RunConfig& cfg) {
    require(!cfg.x_column.empty(), "stratify requires --x");
    const Dataset data = load_dataset(cfg, {{cfg.x_column, Want::continuous}});
    const std::vector<double>& x = x_values(data, cfg.x_column);

    json config = base_config(cfg);
    config["x"] = cfg.x_column;
    config["method"] = cfg.method;
    config["l"] = cfg.l;
    config["l_min"] = cfg.l_min;
    config["l_max"] = cfg.l_max;
    config["alpha"] = num(cfg.alpha);
    config["increment_rule"] = cfg.increment_rule;
    config["seed"] = cfg.seed;
    config["format"] = cfg.format;

    if (cfg.l_max > 0) {
        const ScanResult scan = scan_l(data.ids(), data.y(), x, cfg.l_min, cfg.l_max,
                                       cfg.alpha, cfg.increment_rule);
        if (cfg.format == "csv") {
            write_text(cfg.out, scan_rows_csv(scan));
            return;
        }
        json result;
        result["alpha"] = num(scan.alpha);
        result["increment_rule"] = scan.increment_rule;
        result["selected_l"] =
            scan.selected_l ? json(*scan.selected_l) : json(nullptr);
        if (scan.selected_l) {
            const BreaksResult& fit = scan.fits.at(*scan.selected_l - cfg.l_min);
            json bp = json::array();
            for (double b : fit.breakpoints) bp.push_back(num(b));
            result["selected_breakpoints"] = std::move(bp);
        } else {
            result["selected_breakpoints"] = nullptr;
        }
        result["rows"] = scan_rows_json(scan);
        result["note"] = scan.note;
        write_json_report(cfg, std::move(config), std::move(result));
        return;
    }

    require_json_format(cfg);
    const BreakMethod method = parse_method(cfg.method);
    BreaksResult br = [&] {
        switch (method) {
            case BreakMethod::quantile:
                return discretize_quantile(data.ids(), x, cfg.l);
            case BreakMethod::equal_interval:
                return discretize_equal_interval(data.ids(), x, cfg.l);
            case BreakMethod::optimal_dp:
                return optimal_breaks(data.ids(), data.y(), x, cfg.l);
        }
        throw std::logic_error("unmapped break method");
    }();

    const double q = q_statistic(data.y(), br.partition);
    const Decomposition dec = decompose(data.y(), br.partition);

    json result;
    result["method"] = cfg.method;
    result["requested_l"] = cfg.l;
    result["l"] = br.l;
    json bp = json::array();
    for (double b : br.breakpoints) bp.push_back(num(b));
    result["breakpoints"] = std::move(bp);
    json warnings = json::array();
    for (const std::string& w : br.warnings) warnings.push_back(w);
    result["warnings"] = std::move(warnings);
    result["q"] = num(q);
    result["df1"] = br.l - 1;
    result["df2"] = data.n() - br.l;
    if (q < 1.0) {
        const QResult t = q_test(data.y(), br.partition, TestMode::central_null);
        result["f_stat"] = num(t.f_stat);
        result["p_value"] = num(t.p_value);
    } else if (data.n() > br.l) {
        // q = 1 with residual df: F diverges, p-value takes its limit 0.
        result["f_stat"] = nullptr;
        result["p_value"] = num(0.0);
    } else {
        // One unit per stratum: no residual df, nothing to test.
        result["f_stat"] = nullptr;
        result["p_value"] = nullptr;
    }
    json strata = json::array();
    for (std::size_t h = 0; h < br.partition.l(); ++h) {
        json row;
        row["label"] = br.partition.strata()[h];
        row["n"] = br.partition.sizes()[h];
        row["mean"] = num(dec.stratum_means[h]);
        strata.push_back(std::move(row));
    }
    result["strata"] = std::move(strata);
    write_json_report(cfg, std::move(config), std::move(result));
}

void run_detect(const RunConfig& cfg) {
    require_json_format(cfg);
    require(!cfg.factors.empty() || !cfg.interaction.empty(),
            "detect requires --factor and/or --interaction");
    require(cfg.interaction.empty() || cfg.interaction.size() == 2,
            "--interaction takes exactly two columns");

    std::vector<ColumnRequest> requests;
    for (const std::string& name : cfg.factors)
        requests.push_back({name, Want::automatic});
    for (const std::string& name : cfg.interaction)
        requests.push_back({name, Want::automatic});
    const Dataset data = load_dataset(cfg, requests);

    FactorOptions opts;
    opts.method = parse_method(cfg.method);
    opts.l = cfg.l;
    opts.with_qx = cfg.with_qx;
    opts.descriptive_only = cfg.descriptive_only;

    json config = base_config(cfg);
    config["factors"] = cfg.factors;
    config["interaction"] = cfg.interaction;
    config["method"] = cfg.method;
    config["l"] = cfg.l;
    config["tolerance"] = num(cfg.tolerance);
    config["with_qx"] = cfg.with_qx;
    config["descriptive_only"] = cfg.descriptive_only;
    config["seed"] = cfg.seed;

    json result;
    json table = json::array();
    if (!cfg.factors.empty()) {
        std::vector<FactorResult> screened = factor_screen(data, cfg.factors, opts);
        std::stable_sort(screened.begin(), screened.end(),
                         [](const FactorResult& a, const FactorResult& b) {
                             return a.q > b.q;
                         });
        for (const FactorResult& f : screened) {
            json row;
            row["name"] = f.name;
            row["kind"] = kind_name(data.covariate(f.name).kind);
            row["l"] = f.partition.l();
            row["q"] = num(f.q);
            row["p_value"] = f.test ? num(f.test->p_value) : json(nullptr);
            row["q_x"] = opt_num(f.q_x);
            json warnings = json::array();
            if (f.breaks)
                for (const std::string& w : f.breaks->warnings) warnings.push_back(w);
            row["warnings"] = std::move(warnings);
            table.push_back(std::move(row));
        }
    }
    result["factors"] = std::move(table);

    if (!cfg.interaction.empty()) {
        const Partition p1 = factor_partition(data, cfg.interaction[0], opts);
        const Partition p2 = factor_partition(data, cfg.interaction[1], opts);
        const InteractionResult ir =
            interaction(data.y(), p1, p2, cfg.tolerance);
        json inter;
        inter["x1"] = cfg.interaction[0];
        inter["x2"] = cfg.interaction[1];
        inter["q_x1"] = num(ir.q_x1);
        inter["q_x2"] = num(ir.q_x2);
        inter["q_overlay"] = num(ir.q_overlay);
        inter["l_overlay"] = ir.l_overlay;
        inter["overlay_saturated"] = ir.overlay_saturated;
        inter["category"] = category_name(ir.category);
        inter["tolerance"] = num(ir.tolerance);
        result["interaction"] = std::move(inter);
    } else {
        result["interaction"] = nullptr;
    }
    write_json_report(cfg, std::move(config), std::move(result));
}

void run_scatter(const RunConfig& cfg) {
    require(!cfg.x_column.empty(), "scatter requires --x");
    std::vector<ColumnRequest> requests{{cfg.x_column, Want::continuous}};
    if (!cfg.stratum.empty()) requests.push_back({cfg.stratum, Want::categorical});
    const Dataset data = load_dataset(cfg, requests);
    const std::vector<double>& x = x_values(data, cfg.x_column);

    Partition p = [&] {
        if (!cfg.stratum.empty()) return stratum_partition(data, cfg.stratum);
        FactorOptions opts;
        opts.method = parse_method(cfg.method);
        opts.l = cfg.l;
        return factor_partition(data, cfg.x_column, opts);
    }();
    const std::vector<ScatterDatum> points = scatter_data(data.y(), x, p);

    if (!cfg.svg.empty())
        write_text(cfg.svg, scatter_svg(points, cfg.x_column, cfg.y_column));

    json config = base_config(cfg);
    config["x"] = cfg.x_column;
    config["stratum"] = cfg.stratum.empty() ? json(nullptr) : json(cfg.stratum);
    config["method"] = cfg.method;
    config["l"] = cfg.l;
    config["seed"] = cfg.seed;
    config["format"] = cfg.format;

    if (cfg.format == "csv") {
        std::string csv = "label,mean_x,mean_y,size,q_h\n";
        for (const ScatterDatum& d : points) {
            csv += csv_escape(d.label);
            csv += ',';
            csv += fmt_num(d.mean_x);
            csv += ',';
            csv += fmt_num(d.mean_y);
            csv += ',';
            csv += std::to_string(d.size);
            csv += ',';
            csv += fmt_num(d.q_h);
            csv += '\n';
        }
        write_text(cfg.out, csv);
        return;
    }

    json result;
    result["l"] = p.l();
    json strata = json::array();
    for (const ScatterDatum& d : points) {
        json row;
        row["label"] = d.label;
        row["mean_x"] = num(d.mean_x);
        row["mean_y"] = num(d.mean_y);
        row["size"] = d.size;
        row["q_h"] = num(d.q_h);
        strata.push_back(std::move(row));
    }
    result["strata"] = std::move(strata);
    write_json_report(cfg, std::move(config), std::move(result));
}

// ---- sandwich input files ----

std::size_t find_column(const std::vector<std::string>& header,
                        const std::string& name, const std::string& path) {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw ValidationError("'" + path + "': missing column '" + name + "'");
}

double parse_number(const std::string& raw, const std::string& path,
                    const std::string& column) {
    if (!raw.empty()) {
        char* end = nullptr;
        const double v = std::strtod(raw.c_str(), &end);
        if (end == raw.c_str() + raw.size() && std::isfinite(v)) return v;
    }
    throw ValidationError("'" + path + "': unparseable " + column + " value '" +
                          raw + "'");
}

std::size_t parse_count(const std::string& raw, const std::string& path,
                        const std::string& column) {
    const double v = parse_number(raw, path, column);
    const auto n = static_cast<std::size_t>(v);
    if (static_cast<double>(n) != v)
        throw ValidationError("'" + path + "': " + column + " value '" + raw +
                              "' is not a whole number");
    return n;
}

void run_sandwich(const RunConfig& cfg) {
    require(!cfg.samples.empty() && !cfg.frame.empty() && !cfg.overlaps.empty(),
            "sandwich requires --samples, --frame and --overlaps");

    std::vector<std::string> header;
    std::vector<std::pair<std::string, double>> samples;
    const auto sample_rows = read_csv_rows(cfg.samples, header);
    {
        const std::size_t hc = find_column(header, "h", cfg.samples);
        const std::size_t yc = find_column(header, "y", cfg.samples);
        for (const auto& row : sample_rows)
            samples.emplace_back(row[hc], parse_number(row[yc], cfg.samples, "y"));
    }

    StratumFrame frame;
    const auto frame_rows = read_csv_rows(cfg.frame, header);
    {
        const std::size_t hc = find_column(header, "h", cfg.frame);
        const std::size_t pc = find_column(header, "population", cfg.frame);
        for (const auto& row : frame_rows)
            frame.strata.push_back(
                {row[hc], parse_count(row[pc], cfg.frame, "population")});
    }

    OverlapSpec overlaps;
    const auto overlap_rows = read_csv_rows(cfg.overlaps, header);
    {
        const std::size_t rc = find_column(header, "r", cfg.overlaps);
        const std::size_t hc = find_column(header, "h", cfg.overlaps);
        const std::size_t wc = find_column(header, "weight", cfg.overlaps);
        for (const auto& row : overlap_rows)
            overlaps.push_back(
                {row[rc], row[hc], parse_number(row[wc], cfg.overlaps, "weight")});
    }

    const std::vector<StratumEstimate> estimates =
        stratum_estimates(samples, frame, cfg.fpc);
    const std::vector<SandwichEstimate> mapped = sandwich_map(estimates, overlaps);

    if (cfg.format == "csv") {
        std::string csv = "r,mean,variance\n";
        for (const SandwichEstimate& e : mapped) {
            csv += csv_escape(e.r);
            csv += ',';
            csv += fmt_num(e.mean);
            csv += ',';
            csv += fmt_num(e.variance);
            csv += '\n';
        }
        write_text(cfg.out, csv);
        return;
    }

    json config;
    config["samples"] = cfg.samples;
    config["frame"] = cfg.frame;
    config["overlaps"] = cfg.overlaps;
    config["fpc"] = cfg.fpc;
    config["seed"] = cfg.seed;
    config["format"] = cfg.format;

    json result;
    json strata = json::array();
    for (const StratumEstimate& s : estimates) {
        json row;
        row["label"] = s.label;
        row["n"] = s.n;
        row["population"] = s.population;
        row["mean"] = num(s.mean);
        row["var_of_mean"] = opt_num(s.var_of_mean);
        strata.push_back(std::move(row));
    }
    result["strata"] = std::move(strata);
    json ests = json::array();
    for (const SandwichEstimate& e : mapped) {
        json row;
        row["r"] = e.r;
        row["mean"] = num(e.mean);
        row["variance"] = num(e.variance);
        json contribs = json::array();
        for (const Contributor& c : e.contributors) {
            json cj;
            cj["h"] = c.h;
            cj["weight"] = num(c.weight);
            cj["mean"] = num(c.mean);
            cj["var_of_mean"] = num(c.var_of_mean);
            contribs.push_back(std::move(cj));
        }
        row["contributors"] = std::move(contribs);
        ests.push_back(std::move(row));
    }
    result["estimates"] = std::move(ests);
    write_json_report(cfg, std::move(config), std::move(result));
}

json mc_report_json(const McReport& r) {
    json j;
    j["replicates"] = r.replicates;
    j["lambda"] = num(r.lambda);
    j["ks_distance"] = num(r.ks_distance);
    j["ks_threshold"] = num(r.ks_threshold);
    j["ks_pass"] = r.ks_pass;
    j["empirical_mean"] = num(r.empirical_mean);
    j["empirical_var"] = num(r.empirical_var);
    j["theoretical_mean"] = num(r.theoretical_mean);
    j["theoretical_var"] = num(r.theoretical_var);
    j["frac_p_below_005"] = num(r.frac_p_below_005);
    return j;
}

void run_simulate(const RunConfig& cfg) {
    require_json_format(cfg);
    require(!cfg.preset.empty(), "simulate requires --preset");

    json result;
    std::size_t reps = cfg.reps;
    if (cfg.preset == "null") {
        if (reps == 0) reps = 20000;
        result = mc_report_json(mc_null_calibration(preset_null(cfg.seed), reps));
    } else if (cfg.preset == "noncentral" || cfg.preset == "noncentral-printed") {
        if (reps == 0) reps = 20000;
        const LambdaForm form = cfg.preset == "noncentral"
                                    ? LambdaForm::derived
                                    : LambdaForm::printed_eq6;
        result = mc_report_json(
            mc_noncentral_check(preset_noncentral(cfg.seed), reps, form));
    } else if (cfg.preset == "sandwich-strong" || cfg.preset == "sandwich-null") {
        if (reps == 0) reps = 2000;
        const SandwichBenchReport rep = sandwich_benchmark(
            preset_sandwich(cfg.preset == "sandwich-strong", cfg.seed, reps));
        result["replicates"] = rep.replicates;
        result["sample_size"] = rep.sample_size;
        result["rejected_draws"] = rep.rejected_draws;
        result["rmse_sandwich"] = num(rep.rmse_sandwich);
        result["rmse_global"] = num(rep.rmse_global);
        result["rmse_dominant"] = num(rep.rmse_dominant);
        result["ratio_vs_global"] = num(rep.ratio_vs_global);
        result["coverage_95"] = num(rep.coverage_95);
    } else {
        throw ValidationError(
            "unknown preset '" + cfg.preset +
            "' (expected null | noncentral | noncentral-printed | "
            "sandwich-strong | sandwich-null)");
    }

    json config;
    config["preset"] = cfg.preset;
    config["reps"] = reps;
    config["seed"] = cfg.seed;
    write_json_report(cfg, std::move(config), std::move(result));
}

void dispatch(const RunConfig& cfg) {
    require(cfg.format == "json" || cfg.format == "csv",
            "unknown format '" + cfg.format + "' (expected json | csv)");
    if (cfg.subcommand == "q") return run_q(cfg);
    if (cfg.subcommand == "compare") return run_compare(cfg);
    if (cfg.subcommand == "stratify") return run_stratify(cfg);
    if (cfg.subcommand == "detect") return run_detect(cfg);
    if (cfg.subcommand == "scatter") return run_scatter(cfg);
    if (cfg.subcommand == "sandwich") return run_sandwich(cfg);
    if (cfg.subcommand == "simulate") return run_simulate(cfg);
    throw ValidationError("unknown subcommand '" + cfg.subcommand + "'");
}

void emit_error(const char* type, const std::string& message) {
    json j;
    j["error"]["type"] = type;
    j["error"]["message"] = message;
    std::cerr << j.dump() << "\n";
}

} // namespace

int run(const RunConfig& cfg) {
    try {
        dispatch(cfg);
        return 0;
    } catch (const ValidationError& e) {
        emit_error("validation", e.what());
        return 2;
    } catch (const DegenerateDataError& e) {
        emit_error("degenerate_data", e.what());
        return 3;
    } catch (const std::exception& e) {
        emit_error("internal", e.what());
        return 1;
    }
}

} // namespace sshstat::cli
