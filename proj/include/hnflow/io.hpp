#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hnflow/model.hpp"
#include "hnflow/oracle.hpp"

namespace hnflow {

// Raised on malformed input documents and configs; the CLI maps it to
// exit code 2.
struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parsed input document. Image indices are 1-based positions into the
// twists array as given by the user; tau arrives as an exact "p/q" string.
struct PairSpec {
  std::vector<int> image;
  Rat tau;
};

struct BundleSpec {
  std::vector<int> twists;
  std::optional<PairSpec> pair;
};

// Parses and validates an input document; all diagnostics carry the
// offending field name.
BundleSpec parse_bundle_spec(const nlohmann::json& doc);
BundleSpec parse_bundle_spec_text(const std::string& text);

// The bundle of a spec (twists get sorted internally).
SplitBundle spec_bundle(const BundleSpec& spec);

// The pair model of a spec: 1-based input positions are mapped through the
// descending sort of the twists. Throws SpecError when no pair is present.
PairModel spec_pair(const BundleSpec& spec);

// Output documents. All exact values are serialized as reduced "p/q"
// strings; floats are rounded to 6 decimal places and only ever appear in
// explicitly floating fields.
nlohmann::json hn_document(const BundleSpec& spec);
nlohmann::json destabilize_document(const BundleSpec& spec);
nlohmann::json polygon_document(const BundleSpec& spec);
std::string polygon_svg(const BundleSpec& spec);

// Sweep configuration document for the verify command.
SweepConfig parse_sweep_config(const nlohmann::json& doc);
SweepConfig default_sweep_config();
nlohmann::json verify_document(const SweepConfig& cfg,
                               const CertReport& classical,
                               const CertReport& pairs);

// Canonical serialization: sorted keys, two-space indent, trailing newline.
std::string dump_document(const nlohmann::json& doc);

// Every emitted document re-parses under the schema and re-serializes to
// the identical bytes.
bool schema_roundtrip_ok(const nlohmann::json& doc, std::string* why = nullptr);

// Round-half-even to 6 decimal places (the float rendering contract).
double round6(double x);

}  // namespace hnflow
