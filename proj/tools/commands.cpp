#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "pktilt/blocks.hpp"
#include "pktilt/errors.hpp"
#include "pktilt/oracle.hpp"
#include "pktilt/sampler.hpp"
#include "pktilt/specfun.hpp"

namespace pktilt::cli {

namespace {

constexpr double kSumTolerance = 1e-10;
constexpr double kPmfTolerance = 1e-8;
constexpr double kIdentityTolerance = 1e-8;
constexpr double kPathTolerance = 1e-10;
constexpr double kRatioTolerance = 1e-12;

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string num(std::int64_t x) { return std::to_string(x); }

Report start(const char* command, const RunConfig& cfg) {
    Report r;
    r.record["command"] = command;
    r.record["version"] = PKTILT_VERSION;
    r.record["params"] = {{"alpha", cfg.params.alpha}, {"delta", cfg.params.delta}, {"gamma", cfg.params.gamma}};
    r.record["tolerances"] = {{"quadrature", cfg.tolerance}};
    r.record["checks"] = nlohmann::json::array();
    return r;
}

double log_or_neg_inf(const LogValue& v) { return v.is_zero() ? -INFINITY : v.log_magnitude(); }

// All compositions (ordered block sizes) of every m in [1, n_max].
std::vector<Composition> compositions_up_to(std::int64_t n_max) {
    std::vector<Composition> out;
    std::vector<std::int64_t> current;
    auto recurse = [&](auto&& self, std::int64_t remaining) -> void {
        if (remaining == 0) {
            out.emplace_back(current);
            return;
        }
        for (std::int64_t s = 1; s <= remaining; ++s) {
            current.push_back(s);
            self(self, remaining - s);
            current.pop_back();
        }
    };
    for (std::int64_t m = 1; m <= n_max; ++m) recurse(recurse, m);
    return out;
}

Composition sizes_of(const std::vector<std::int32_t>& labels) {
    std::vector<std::int64_t> sizes;
    for (auto l : labels) {
        if (static_cast<std::size_t>(l) > sizes.size()) sizes.resize(static_cast<std::size_t>(l), 0);
        ++sizes[static_cast<std::size_t>(l - 1)];
    }
    return Composition(std::move(sizes));
}

void write_csv(const Report& r, std::ostream& out) {
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << '\n';
    };
    line(r.csv_header);
    for (const auto& row : r.csv_rows) line(row);
}

}  // namespace

QuadratureSpec RunConfig::quadrature() const {
    QuadratureSpec spec;
    spec.relative_tolerance = tolerance;
    return spec;
}

void Report::add_check(const std::string& name, double value, double threshold, bool pass) {
    record["checks"].push_back({{"name", name}, {"value", value}, {"threshold", threshold}, {"pass", pass}});
}

bool Report::ok() const {
    if (!record.contains("checks")) return true;
    for (const auto& c : record["checks"])
        if (!c["pass"].get<bool>()) return false;
    return true;
}

Report cmd_eppf(const RunConfig& cfg, const Composition& c, bool oracle_pd) {
    if (c.empty()) throw DomainError("eppf: --composition is required");
    if (oracle_pd && cfg.params.gamma != 0.0) throw DomainError("eppf: --oracle pd requires --gamma 0");
    Report r = start("eppf", cfg);
    const GibbsWeights w(cfg.params, cfg.quadrature());
    const LogValue log_p = log_eppf(c, w);
    const LogValue log_v = w.log_vnk(c.n(), c.k());
    std::vector<double> log_weights;
    std::vector<double> weights;
    for (auto s : c.block_sizes()) {
        log_weights.push_back(log_rising_factorial(1.0 - cfg.params.alpha, s - 1));
        weights.push_back(std::exp(log_weights.back()));
    }
    const double p = log_p.to_linear();
    r.record["composition"] = c.block_sizes();
    r.record["n"] = c.n();
    r.record["k"] = c.k();
    r.record["log_p"] = log_or_neg_inf(log_p);
    r.record["p"] = p;
    r.record["log_V_nk"] = log_or_neg_inf(log_v);
    r.record["V_nk"] = log_v.to_linear();
    r.record["log_weights"] = log_weights;
    r.record["weights"] = weights;
    r.add_check("p_at_most_one", p, 1.0, p <= 1.0 + 1e-12 && p >= 0.0);

    r.csv_header = {"n", "k", "log_p", "p", "log_V_nk", "V_nk"};
    std::vector<std::string> row{num(c.n()), num(c.k()), num(log_or_neg_inf(log_p)), num(p), num(log_or_neg_inf(log_v)),
                                 num(log_v.to_linear())};
    if (oracle_pd) {
        const LogValue pd = log_eppf_pd(c, cfg.params.alpha);
        const double diff = std::fabs(log_or_neg_inf(pd) - log_or_neg_inf(log_p));
        r.record["oracle"] = {{"name", "pd"}, {"log_p", log_or_neg_inf(pd)}, {"p", pd.to_linear()}, {"abs_log_diff", diff}};
        r.add_check("pd_agreement", diff, kIdentityTolerance, diff <= kIdentityTolerance);
        r.csv_header.push_back("pd_log_p");
        row.push_back(num(log_or_neg_inf(pd)));
    }
    r.csv_rows.push_back(std::move(row));
    return r;
}

Report cmd_predict(const RunConfig& cfg, const Composition& c) {
    Report r = start("predict", cfg);
    const GibbsWeights w(cfg.params, cfg.quadrature());
    const PredictiveDistribution rule = predictive(c, w);
    r.record["composition"] = c.block_sizes();
    r.record["n"] = c.n();
    r.record["k"] = c.k();
    auto existing = nlohmann::json::array();
    r.csv_header = {"block", "size", "log_weight", "weight"};
    for (std::size_t j = 0; j < rule.existing_block_weights.size(); ++j) {
        const double x = rule.existing_block_weights[j];
        existing.push_back({{"block", j + 1}, {"size", c.block_sizes()[j]}, {"log_weight", std::log(x)}, {"weight", x}});
        r.csv_rows.push_back({num(static_cast<std::int64_t>(j + 1)), num(c.block_sizes()[j]), num(std::log(x)), num(x)});
    }
    r.record["existing"] = existing;
    r.record["q"] = rule.new_block_weight;
    r.record["log_q"] = std::log(rule.new_block_weight);
    r.csv_rows.push_back({"new", "0", num(std::log(rule.new_block_weight)), num(rule.new_block_weight)});

    const double sum = rule.total();
    r.record["sum"] = sum;
    r.add_check("weights_sum", std::fabs(sum - 1.0), kSumTolerance, std::fabs(sum - 1.0) <= kSumTolerance);
    if (c.k() >= 2) {
        const double a = cfg.params.alpha;
        const auto& sizes = c.block_sizes();
        const double ratio = rule.existing_block_weights[0] / rule.existing_block_weights[1];
        const double expected = (static_cast<double>(sizes[0]) - a) / (static_cast<double>(sizes[1]) - a);
        r.record["ratio_p1_p2"] = ratio;
        r.record["expected_ratio_p1_p2"] = expected;
        const double err = std::fabs(ratio / expected - 1.0);
        r.add_check("ratio_p1_p2", err, kRatioTolerance, err <= kRatioTolerance);
    }
    return r;
}

Report cmd_blocks(const RunConfig& cfg) {
    Report r = start("blocks", cfg);
    const BlockCountPmf pmf = blocks_pmf(cfg.n, cfg.params, cfg.quadrature());
    r.record["n"] = cfg.n;
    auto rows = nlohmann::json::array();
    r.csv_header = {"k", "log_p", "p"};
    for (std::size_t i = 0; i < pmf.probabilities.size(); ++i) {
        const auto k = static_cast<std::int64_t>(i + 1);
        rows.push_back({{"k", k}, {"log_p", pmf.log_probabilities[i]}, {"p", pmf.probabilities[i]}});
        r.csv_rows.push_back({num(k), num(pmf.log_probabilities[i]), num(pmf.probabilities[i])});
    }
    r.record["pmf"] = rows;
    const double sum = pmf.total();
    r.record["sum"] = sum;
    r.add_check("pmf_sum", std::fabs(sum - 1.0), kPmfTolerance, std::fabs(sum - 1.0) <= kPmfTolerance);
    return r;
}

Report cmd_diversity(const RunConfig& cfg, const std::vector<double>& s_grid) {
    if (s_grid.empty()) throw DomainError("diversity: empty s grid");
    Report r = start("diversity", cfg);
    const QuadratureSpec spec = cfg.quadrature();
    auto rows = nlohmann::json::array();
    r.csv_header = {"s", "log_density", "density", "cdf"};
    for (double s : s_grid) {
        const LogValue f = log_diversity_density(cfg.params, s);
        nlohmann::json cdf = nullptr;
        try {
            cdf = diversity_cdf(cfg.params, s, spec);
        } catch (const CancellationError&) {
        }
        rows.push_back({{"s", s}, {"log_density", log_or_neg_inf(f)}, {"density", f.to_linear()}, {"cdf", cdf}});
        r.csv_rows.push_back({num(s), num(log_or_neg_inf(f)), num(f.to_linear()), cdf.is_null() ? "" : num(cdf.get<double>())});
    }
    r.record["grid"] = rows;
    r.record["limit_scale"] = limit_scale(cfg.params);

    const LogIntegrand f = [&](double s) {
        return s > 0.0 ? log_diversity_density(cfg.params, s) : LogValue::zero();
    };
    try {
        const double integral = integrate_decaying(f, 0.0, spec).to_linear();
        r.record["integral"] = integral;
        r.add_check("integral", std::fabs(integral - 1.0), kPmfTolerance, std::fabs(integral - 1.0) <= kPmfTolerance);
    } catch (const CancellationError& e) {
        r.record["integral"] = nullptr;
        r.record["integral_note"] = e.what();
    }
    return r;
}

Report cmd_sample(const RunConfig& cfg, std::int64_t count) {
    if (count < 1) throw DomainError("sample: --replicates must be >= 1");
    Report r = start("sample", cfg);
    r.record["n"] = cfg.n;
    r.record["seed"] = cfg.seed;
    const GibbsWeights w(cfg.params, cfg.quadrature());
    auto samples = nlohmann::json::array();
    r.csv_header = {"replicate", "element", "block"};
    std::int64_t violations = 0;
    for (std::int64_t i = 0; i < count; ++i) {
        Rng rng = make_stream(cfg.seed, static_cast<std::uint64_t>(i));
        const PartitionSample s = sample_partition(cfg.n, w, rng);
        std::int32_t highest = 0;
        for (std::size_t e = 0; e < s.block_of.size(); ++e) {
            const auto l = s.block_of[e];
            if (l < 1 || l > highest + 1) ++violations;
            highest = std::max(highest, l);
            r.csv_rows.push_back({num(i), num(static_cast<std::int64_t>(e + 1)), num(static_cast<std::int64_t>(l))});
        }
        if (s.block_sizes.n() != cfg.n) ++violations;
        samples.push_back({{"block_of", s.block_of}, {"block_sizes", s.block_sizes.block_sizes()}, {"k", s.block_count()}});
    }
    r.record["samples"] = samples;
    r.add_check("label_order", static_cast<double>(violations), 0.0, violations == 0);
    return r;
}

Report cmd_validate(const RunConfig& cfg, bool monte_carlo, std::int64_t replicates, double max_tv) {
    Report r = start("validate", cfg);
    r.record["n"] = cfg.n;
    const GibbsWeights w(cfg.params, cfg.quadrature());
    const auto n = cfg.n;

    const BlockCountPmf pmf = blocks_pmf(n, w, StirlingTable(cfg.params.alpha, n));
    const double sum = pmf.total();
    r.add_check("blocks_sum", std::fabs(sum - 1.0), kPmfTolerance, std::fabs(sum - 1.0) <= kPmfTolerance);

    if (n <= 8) {
        const BlockCountPmf exact = exact_blocks_pmf(n, w);
        const double total = exact.total();
        r.add_check("eppf_normalization", std::fabs(total - 1.0), kIdentityTolerance,
                    std::fabs(total - 1.0) <= kIdentityTolerance);
        double worst = 0.0;
        for (std::size_t i = 0; i < pmf.probabilities.size(); ++i)
            worst = std::max(worst, std::fabs(pmf.probabilities[i] - exact.probabilities[i]));
        r.add_check("blocks_vs_enumeration", worst, kPmfTolerance, worst <= kPmfTolerance);
        r.record["enumeration_pmf"] = exact.probabilities;

        double additivity = 0.0;
        double pd = 0.0;
        for (const auto& c : compositions_up_to(n)) {
            const LogValue parent = log_eppf(c, w);
            if (c.n() < n) {
                LogValue children;
                for (std::size_t j = 0; j <= c.block_sizes().size(); ++j) children += log_eppf(c.grown(j), w);
                additivity = std::max(additivity, std::fabs(std::expm1(children.log_magnitude() - parent.log_magnitude())));
            }
            if (cfg.params.gamma == 0.0)
                pd = std::max(pd, std::fabs(log_eppf_pd(c, cfg.params.alpha).log_magnitude() - parent.log_magnitude()));
        }
        if (n >= 2) r.add_check("eppf_additivity", additivity, kIdentityTolerance, additivity <= kIdentityTolerance);
        if (cfg.params.gamma == 0.0) r.add_check("pd_boundary", pd, kIdentityTolerance, pd <= kIdentityTolerance);

        double path = 0.0;
        for (const auto& p : exact_path_distribution(n, w))
            path = std::max(path, std::fabs(p.probability - log_eppf(sizes_of(p.block_of), w).to_linear()));
        r.add_check("sampler_exactness", path, kPathTolerance, path <= kPathTolerance);
    } else {
        r.record["skipped"] = "enumeration identities need n <= 8";
    }
    r.record["pmf"] = pmf.probabilities;

    if (monte_carlo) {
        const McReport mc = monte_carlo_blocks(n, w, replicates, cfg.seed);
        r.record["mc"] = {{"replicates", mc.replicates}, {"seed", mc.seed}, {"empirical_pmf", mc.empirical_pmf},
                          {"reference_pmf", mc.reference_pmf}, {"tv_distance", mc.tv_distance}};
        r.add_check("tv_distance", mc.tv_distance, max_tv, mc.tv_distance < max_tv);
    }

    r.csv_header = {"check", "value", "threshold", "pass"};
    for (const auto& c : r.record["checks"])
        r.csv_rows.push_back({c["name"].get<std::string>(), num(c["value"].get<double>()),
                              num(c["threshold"].get<double>()), c["pass"].get<bool>() ? "true" : "false"});
    return r;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exponentially tilted stable Poisson-Kingman partitions", "pktilt"};
    app.set_version_flag("--version", PKTILT_VERSION);
    app.require_subcommand(1);

    RunConfig cfg;
    std::string format = "json";
    std::vector<std::int64_t> composition;
    std::string oracle;
    std::vector<double> s_values;
    double s_min = 0.05, s_max = 10.0;
    std::int64_t points = 50;
    std::int64_t replicates = 0;
    double max_tv = 0.01;
    bool mc = false;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--alpha", cfg.params.alpha, "stability index in (0,1)")->capture_default_str();
        sub->add_option("--delta", cfg.params.delta, "scale, > 0")->capture_default_str();
        sub->add_option("--gamma", cfg.params.gamma, "tilting, >= 0")->capture_default_str();
        sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
        sub->add_option("--out", cfg.out, "write to this file instead of stdout");
        sub->add_option("--tolerance", cfg.tolerance, "relative quadrature tolerance")
            ->envname("PK_TILT_TOLERANCE")
            ->capture_default_str();
    };
    auto with_n = [&](CLI::App* sub) { sub->add_option("--n", cfg.n, "sample size")->capture_default_str(); };
    auto with_seed = [&](CLI::App* sub) { sub->add_option("--seed", cfg.seed, "64-bit seed")->capture_default_str(); };

    auto* eppf = app.add_subcommand("eppf", "EPPF of a composition");
    common(eppf);
    eppf->add_option("--composition", composition, "block sizes, e.g. 3,2")->delimiter(',')->required();
    eppf->add_option("--oracle", oracle, "also print an independent closed form")->check(CLI::IsMember({"pd"}));

    auto* predict = app.add_subcommand("predict", "predictive weights given a composition");
    common(predict);
    predict->add_option("--composition", composition, "block sizes; omit for the empty state")->delimiter(',');

    auto* blocks = app.add_subcommand("blocks", "distribution of the number of blocks");
    common(blocks);
    with_n(blocks);

    auto* diversity = app.add_subcommand("diversity", "alpha-diversity density on a grid");
    common(diversity);
    diversity->add_option("--s", s_values, "explicit grid points")->delimiter(',');
    diversity->add_option("--s-min", s_min, "geometric grid start")->capture_default_str();
    diversity->add_option("--s-max", s_max, "geometric grid end")->capture_default_str();
    diversity->add_option("--points", points, "geometric grid size")->capture_default_str();

    auto* sample = app.add_subcommand("sample", "draw partitions with the prediction rule");
    common(sample);
    with_n(sample);
    with_seed(sample);
    sample->add_option("--replicates", replicates, "number of partitions (default 1)");

    auto* validate = app.add_subcommand("validate", "oracle identities and optional Monte Carlo check");
    common(validate);
    with_n(validate);
    with_seed(validate);
    validate->add_flag("--mc", mc, "compare a Monte Carlo K_n histogram with the analytic pmf");
    validate->add_option("--replicates", replicates, "Monte Carlo replicates (default 100000)");
    validate->add_option("--max-tv", max_tv, "total-variation threshold")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }

    try {
        cfg.format = format == "csv" ? Format::csv : Format::json;
        cfg.params.validate();
        cfg.quadrature().validate();
        if (cfg.n < 1) throw DomainError("--n must be >= 1");

        Report report;
        if (*eppf) report = cmd_eppf(cfg, Composition(composition), !oracle.empty());
        else if (*predict) report = cmd_predict(cfg, Composition(composition));
        else if (*blocks) report = cmd_blocks(cfg);
        else if (*diversity) {
            if (s_values.empty()) {
                if (!(s_min > 0.0 && s_max >= s_min) || points < 1) throw DomainError("diversity: bad grid");
                for (std::int64_t i = 0; i < points; ++i) {
                    const double t = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
                    s_values.push_back(s_min * std::pow(s_max / s_min, t));
                }
            }
            report = cmd_diversity(cfg, s_values);
        } else if (*sample) report = cmd_sample(cfg, replicates == 0 ? 1 : replicates);
        else report = cmd_validate(cfg, mc, replicates == 0 ? 100000 : replicates, max_tv);

        const bool ok = report.ok();
        report.record["ok"] = ok;

        std::ofstream file;
        if (!cfg.out.empty()) {
            file.open(cfg.out);
            if (!file) throw std::runtime_error("cannot open " + cfg.out);
        }
        std::ostream& sink = cfg.out.empty() ? out : file;
        if (cfg.format == Format::json) sink << report.record.dump(2) << '\n';
        else write_csv(report, sink);
        if (!ok) err << "self-check failed\n";
        return ok ? 0 : 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace pktilt::cli
