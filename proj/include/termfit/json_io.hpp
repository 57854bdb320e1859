#pragma once

#include <optional>
#include <string>

#include "termfit/curve_models.hpp"
#include "termfit/data_ingest.hpp"
#include "termfit/local_search.hpp"
#include "termfit/metaheuristics.hpp"
#include "termfit/optim_core.hpp"

namespace termfit {

/// All tunables the CLI reads from its JSON config file, block per
/// optimizer plus the data conventions.
struct FitConfig {
    GaConfig ga;
    AcoConfig aco;
    PsoConfig pso;
    SaConfig sa;
    BarrierOptions bfgs;
    IngestConfig data;
};

/// Parses the config file; absent blocks/keys keep their defaults, unknown
/// keys are an error (catches typos). Throws std::runtime_error with the
/// offending key or file problem.
FitConfig load_fit_config(const std::string& path);

/// Flat parameter JSON: {"model":"ns"|"svensson","beta0":...,...}.
std::string params_to_json(const CurveParams& params);
CurveParams params_from_json_text(const std::string& text);
CurveParams load_params_file(const std::string& path);
void save_params_file(const std::string& path, const CurveParams& params);

/// Full multistart report as pretty JSON (keys sorted; the only
/// nondeterministic fields are the *_seconds timings).
std::string report_to_json(const MultistartReport& report);

std::string exclusions_to_jsonl(const std::vector<Exclusion>& exclusions);

}  // namespace termfit
