#pragma once
// Text format for collections on disk. A collection directory holds one
// template.tsg plus one instance_NNNN.tsg file per time window:
//
//   template.tsg        TSGT 1
//                       DIRECTED 0|1
//                       VATTR <name> <type> <kind> [<value>]
//                       EATTR <name> <type> <kind> [<value>]
//                       V <vid>
//                       E <eid> <src> <dst>
//   instance_NNNN.tsg   TSGI 1
//                       RANGE <start> <end>
//                       VA <vid> <attr> <value>
//                       EA <eid> <attr> <value>
//
// Repeated VA/EA lines for the same element and attribute append values.
// String-typed values run to the end of the line; other types are single
// tokens. '#' starts a comment. See docs/FORMATS.md for the full grammar.

#include <filesystem>
#include <string>

#include "core/model.hpp"

namespace tsg {

Collection read_collection(const std::filesystem::path& dir);
void write_collection(const Collection& c, const std::filesystem::path& dir);

GraphTemplate read_template_file(const std::filesystem::path& file);
GraphInstance read_instance_file(const GraphTemplate& tpl, const std::filesystem::path& file);

// Single-file writers for callers that stream instances to disk one at a
// time instead of holding a whole collection in memory.
void write_template_file(const GraphTemplate& tpl, const std::filesystem::path& file);
void write_instance_file(const GraphInstance& inst, const std::filesystem::path& file);

}  // namespace tsg
