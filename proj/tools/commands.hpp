#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pktilt/eppf.hpp"
#include "pktilt/quadrature.hpp"
#include "pktilt/tempered_stable.hpp"

namespace pktilt::cli {

enum class Format { json, csv };

struct RunConfig {
    GGParams params;
    std::int64_t n = 1;
    Format format = Format::json;
    std::uint64_t seed = 1;
    double tolerance = 1e-10;
    std::string out;

    QuadratureSpec quadrature() const;
};

// Outcome of one command: a JSON record, its CSV rendering, and whether every
// self-check passed.
struct Report {
    nlohmann::json record;
    std::vector<std::string> csv_header;
    std::vector<std::vector<std::string>> csv_rows;

    void add_check(const std::string& name, double value, double threshold, bool pass);
    bool ok() const;
};

Report cmd_eppf(const RunConfig& cfg, const Composition& c, bool oracle_pd);
Report cmd_predict(const RunConfig& cfg, const Composition& c);
Report cmd_blocks(const RunConfig& cfg);
Report cmd_diversity(const RunConfig& cfg, const std::vector<double>& s_grid);
Report cmd_sample(const RunConfig& cfg, std::int64_t count);
Report cmd_validate(const RunConfig& cfg, bool monte_carlo, std::int64_t replicates, double max_tv);

// Parses argv, runs the command and writes its output. Returns 0 iff all
// self-checks pass, 1 if one fails, 2 on usage or numerical errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pktilt::cli
