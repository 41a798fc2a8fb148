#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "nonholo/errors.hpp"
#include "nonholo/run_config.hpp"

namespace nonholo {

// Fills defaults that depend on the environment (tolerance profile), so the
// returned config reproduces the run on its own.
RunConfig resolve(const RunConfig& cfg);

// Runs one command and returns the rendered artifact (JSON or CSV text). The
// artifact embeds run_config_to_json(resolve(cfg)). Relative input paths are
// looked up against `base_dir`, the working directory and the shipped data
// directory, in that order. Throws Error.
std::string execute(const RunConfig& cfg, const std::filesystem::path& base_dir = {});

// CLI entry: executes, writes the artifact to cfg.output_path (or `out`
// when empty) and returns the exit status. Failures print an error object
// {"error": {"kind", "message"}} to `out` and return 2 (validation) or 3
// (numeric failure).
int run(const RunConfig& cfg, std::ostream& out, const std::filesystem::path& base_dir = {});

int exit_code(ErrorKind kind);
nlohmann::json error_json(ErrorKind kind, const std::string& message);

// Reads the config block embedded in an artifact produced by execute().
RunConfig embedded_config(const std::string& artifact);

}  // namespace nonholo
