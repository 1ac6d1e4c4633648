#pragma once

#include <optional>
#include <string>

#include "adtnc/coding.hpp"
#include "adtnc/matrix.hpp"
#include "adtnc/mincut.hpp"
#include "adtnc/network.hpp"
#include "adtnc/poly.hpp"
#include "json.hpp"

namespace adtnc {

using Json = nlohmann::json;

/* File conventions: ports and process indices are 1-based in documents and
 * 0-based in memory; nodes are referenced by their id string. Emission is
 * canonical (sorted keys, defaults omitted), so parse -> emit round-trips a
 * canonical document byte for byte. */

Json field_to_json(const Gf* f);
const Gf* field_from_json(const Json& j);

Json network_to_json(const Network& net);
Network network_from_json(const Json& j);
Network load_network(const std::string& path);

Json code_to_json(const CodeAssignment& code);
CodeAssignment code_from_json(const Json& j);
CodeAssignment load_code(const std::string& path);

// Report envelope: {"schema": "adtnc-report/1", "command": ..., "result": ...}
// plus the seed when the command consumed randomness.
Json report_envelope(const std::string& command, Json result,
                     std::optional<uint64_t> seed = {});

Json matrix_to_json(const Matrix<Fe>& m);    // rows of raw field encodings
Json rat_matrix_to_json(const Matrix<Rat>& m);  // rows of "(num)/(den)" strings

// Strict parse of a whole JSON file; UsageError when unreadable, ParseError
// when malformed.
Json load_json(const std::string& path);

// Same for in-memory text; `what` names the document in the ParseError.
Json parse_json(const std::string& text, const std::string& what = "document");

/* Report fragments shared by the CLI and the Python module: one object per
 * receiver / cut pair, node names instead of indices, defaults omitted. */
Json receivers_to_json(const Network& net, const CodeVerdict& v);
Json stats_to_json(const CodeStats& s);
Json cut_to_json(const Network& net, const CutReport& r);

}  // namespace adtnc
