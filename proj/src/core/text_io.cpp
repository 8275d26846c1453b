#include "core/text_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace tsg {

namespace fs = std::filesystem;

namespace {

struct Line {
  std::string keyword;
  std::vector<std::string> tokens;  // tokens after the keyword
  std::string rest;                 // everything after the keyword, untrimmed tail split lazily
};

// Splits a line into whitespace-separated tokens, dropping '#' comments.
bool tokenize(const std::string& raw, std::vector<std::string>& out) {
  out.clear();
  std::string line = raw;
  if (auto pos = line.find('#'); pos != std::string::npos) line.resize(pos);
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return !out.empty();
}

std::uint64_t parse_id(const std::string& s) {
  try {
    std::size_t used = 0;
    std::uint64_t v = std::stoull(s, &used);
    if (used != s.size()) throw TsgError("");
    return v;
  } catch (...) {
    throw TsgError("bad id: " + s);
  }
}

Time parse_time(const std::string& s) {
  try {
    return static_cast<Time>(std::stoll(s));
  } catch (...) {
    throw TsgError("bad time: " + s);
  }
}

// Value text for one VA/EA or schema line: string attributes may span several
// tokens, everything else is exactly one token.
std::string join_value_tokens(const std::vector<std::string>& toks, std::size_t from,
                              ValueType type, const std::string& context) {
  if (from >= toks.size()) throw TsgError(context + ": missing value");
  if (type != ValueType::String && toks.size() != from + 1)
    throw TsgError(context + ": trailing tokens");
  std::string out = toks[from];
  for (std::size_t i = from + 1; i < toks.size(); ++i) out += " " + toks[i];
  return out;
}

AttributeSchema parse_schema_line(const std::vector<std::string>& toks) {
  if (toks.size() < 4) throw TsgError("schema line needs name, type and kind");
  AttributeSchema a;
  a.name = toks[1];
  auto type = parse_value_type(toks[2]);
  if (!type) throw TsgError("bad attribute type: " + toks[2]);
  a.type = *type;
  auto kind = parse_attr_kind(toks[3]);
  if (!kind) throw TsgError("bad attribute kind: " + toks[3]);
  a.kind = *kind;
  if (a.kind != AttrKind::Normal)
    a.fixed = value_from_string(a.type, join_value_tokens(toks, 4, a.type, "schema " + a.name));
  else if (toks.size() > 4)
    throw TsgError("schema " + a.name + ": normal attribute takes no value");
  return a;
}

}  // namespace

GraphTemplate read_template_file(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw TsgError("cannot open " + file.string());

  bool directed = false;
  std::vector<VertexId> vertices;
  std::vector<EdgeDef> edges;
  std::vector<AttributeSchema> vschema, eschema;

  std::string raw;
  std::vector<std::string> toks;
  bool saw_header = false;
  while (std::getline(in, raw)) {
    if (!tokenize(raw, toks)) continue;
    const std::string& kw = toks[0];
    if (!saw_header) {
      if (kw != "TSGT" || toks.size() != 2 || toks[1] != "1")
        throw TsgError(file.string() + ": not a template file (expected \"TSGT 1\")");
      saw_header = true;
      continue;
    }
    if (kw == "DIRECTED") {
      if (toks.size() != 2 || (toks[1] != "0" && toks[1] != "1"))
        throw TsgError("DIRECTED takes 0 or 1");
      directed = toks[1] == "1";
    } else if (kw == "VATTR") {
      vschema.push_back(parse_schema_line(toks));
    } else if (kw == "EATTR") {
      eschema.push_back(parse_schema_line(toks));
    } else if (kw == "V") {
      if (toks.size() != 2) throw TsgError("V takes one id");
      vertices.push_back(parse_id(toks[1]));
    } else if (kw == "E") {
      if (toks.size() != 4) throw TsgError("E takes id, src, dst");
      edges.push_back({parse_id(toks[1]), parse_id(toks[2]), parse_id(toks[3])});
    } else {
      throw TsgError(file.string() + ": unknown keyword " + kw);
    }
  }
  if (!saw_header) throw TsgError(file.string() + ": empty template file");
  return GraphTemplate(directed, std::move(vertices), std::move(edges), std::move(vschema),
                       std::move(eschema));
}

GraphInstance read_instance_file(const GraphTemplate& tpl, const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw TsgError("cannot open " + file.string());

  GraphInstance inst;
  std::string raw;
  std::vector<std::string> toks;
  bool saw_header = false;
  bool saw_range = false;
  while (std::getline(in, raw)) {
    if (!tokenize(raw, toks)) continue;
    const std::string& kw = toks[0];
    if (!saw_header) {
      if (kw != "TSGI" || toks.size() != 2 || toks[1] != "1")
        throw TsgError(file.string() + ": not an instance file (expected \"TSGI 1\")");
      saw_header = true;
      continue;
    }
    if (kw == "RANGE") {
      if (toks.size() != 3) throw TsgError("RANGE takes start and end");
      inst = GraphInstance(parse_time(toks[1]), parse_time(toks[2]));
      saw_range = true;
    } else if (kw == "VA" || kw == "EA") {
      if (!saw_range) throw TsgError(file.string() + ": RANGE must precede values");
      if (toks.size() < 3) throw TsgError(kw + " takes element, attribute and value");
      ElemClass cls = kw == "VA" ? ElemClass::Vertex : ElemClass::Edge;
      std::uint64_t elem = parse_id(toks[1]);
      const std::string& attr = toks[2];
      // Schema lookup only determines the parse type here; unknown attributes
      // are kept as strings so validate() can report them.
      const AttributeSchema* schema = tpl.find_attr(cls, attr);
      ValueType type = schema ? schema->type : ValueType::String;
      std::string text = join_value_tokens(toks, 3, type, kw + " " + attr);
      inst.add_value(cls, elem, attr, value_from_string(type, text));
    } else {
      throw TsgError(file.string() + ": unknown keyword " + kw);
    }
  }
  if (!saw_range) throw TsgError(file.string() + ": missing RANGE");
  return inst;
}

Collection read_collection(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw TsgError("not a collection directory: " + dir.string());
  Collection c;
  c.tpl = read_template_file(dir / "template.tsg");

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    auto name = entry.path().filename().string();
    if (name.rfind("instance_", 0) == 0 && entry.path().extension() == ".tsg")
      files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) c.instances.push_back(read_instance_file(c.tpl, f));
  return c;
}

namespace {

void write_schema_lines(std::ofstream& out, const char* kw,
                        const std::vector<AttributeSchema>& schema) {
  for (const auto& a : schema) {
    out << kw << ' ' << a.name << ' ' << value_type_name(a.type) << ' ' << attr_kind_name(a.kind);
    if (a.fixed) out << ' ' << value_to_string(*a.fixed);
    out << '\n';
  }
}

void write_values(std::ofstream& out, const char* kw, const GraphInstance::AttrMap& vals) {
  for (const auto& [attr, per_elem] : vals) {
    std::vector<std::uint64_t> ids;
    ids.reserve(per_elem.size());
    for (const auto& [id, _] : per_elem) ids.push_back(id);
    std::sort(ids.begin(), ids.end());
    for (auto id : ids)
      for (const auto& v : per_elem.at(id))
        out << kw << ' ' << id << ' ' << attr << ' ' << value_to_string(v) << '\n';
  }
}

}  // namespace

void write_template_file(const GraphTemplate& tpl, const fs::path& file) {
  std::ofstream out(file);
  if (!out) throw TsgError("cannot write " + file.string());
  out << "TSGT 1\n";
  out << "DIRECTED " << (tpl.directed() ? 1 : 0) << '\n';
  write_schema_lines(out, "VATTR", tpl.schema(ElemClass::Vertex));
  write_schema_lines(out, "EATTR", tpl.schema(ElemClass::Edge));
  for (auto v : tpl.vertices()) out << "V " << v << '\n';
  for (const auto& e : tpl.edges()) out << "E " << e.id << ' ' << e.src << ' ' << e.dst << '\n';
}

void write_instance_file(const GraphInstance& inst, const fs::path& file) {
  std::ofstream out(file);
  if (!out) throw TsgError("cannot write " + file.string());
  out << "TSGI 1\n";
  out << "RANGE " << inst.start() << ' ' << inst.end() << '\n';
  write_values(out, "VA", inst.values(ElemClass::Vertex));
  write_values(out, "EA", inst.values(ElemClass::Edge));
}

void write_collection(const Collection& c, const fs::path& dir) {
  fs::create_directories(dir);
  write_template_file(c.tpl, dir / "template.tsg");
  for (std::size_t i = 0; i < c.instances.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "instance_%04zu.tsg", i);
    write_instance_file(c.instances[i], dir / name);
  }
}

}  // namespace tsg
