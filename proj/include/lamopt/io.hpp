#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lamopt/geometry.hpp"
#include "lamopt/pipeline.hpp"
#include "lamopt/problem.hpp"

// JSON ingestion and reporting. Parsing is strict: unknown keys are
// rejected, types are checked, and parse errors carry line/column
// diagnostics. Serialization is deterministic: fixed key order, floats at 17
// significant digits, so identical inputs produce byte-identical files.

namespace lamopt::io {

/// Parses and validates a DesignProblem document. Throws Error(schema_error)
/// with a path or line/column diagnostic.
DesignProblem parseProblem(const std::string& text);

struct StackFile {
  Material material;
  std::vector<double> angles;         ///< the angle set, degrees
  std::vector<double> stack_degrees;  ///< ply angles mid-plane -> skin
};

/// Parses a stacking-sequence document (material + angles + stack).
StackFile parseStackFile(const std::string& text);

/// Angle values resolved to indices into the set; throws schema_error when a
/// ply angle is not in the set (after normalization).
StackingSequence resolveStack(const StackFile& file, const AngleSet& angles);

std::string problemDigest(const std::string& bytes);  ///< fnv1a64:<hex>

std::string resultToJson(const DesignResult& result, const DesignProblem& problem,
                         const std::string& input_digest, bool with_timings);

std::string regionToJson(const PlyCounts& counts, const std::vector<double>& angles,
                         XiMode mode, const FeasiblePolytope& poly);

std::string regionVerticesCsv(const FeasiblePolytope& poly);

std::string paramsReportJson(const StackFile& file);

/// "midpoint" / "exact" <-> XiMode.
XiMode parseXiMode(const std::string& name);
const char* xiModeName(XiMode mode);

}  // namespace lamopt::io
