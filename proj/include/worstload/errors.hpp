#pragma once

#include <stdexcept>
#include <string>

namespace worstload {

// Error categories; the CLI maps them onto process exit codes
// (0 success, 2 config, 3 mesh/input, 4 solver).
enum class errc {
    parameter,        // bad argument values (radii ordering, counts, ...)
    geometry,         // inconsistent geometric request (overlaps, out of bounds)
    resolution,       // target_h too coarse for the requested features
    parse,            // malformed input file
    topology,         // boundary loop structure violated
    validation,       // mesh failed invariant checks
    empty_region,     // energy region contains no elements
    undefined_ratio,  // concentration ratio has zero denominator
    solver,           // linear algebra failure or residual out of tolerance
    config,           // bad run configuration
    io                // file system failure
};

class Error : public std::runtime_error {
  public:
    Error(errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    errc code() const noexcept { return code_; }

    static int exit_code(errc c) {
        switch (c) {
            case errc::config:
            case errc::undefined_ratio: return 2;
            case errc::solver: return 4;
            default: return 3;
        }
    }

  private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace worstload
