#include "tmw/editlog.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "tmw/ter.hpp"
#include "tmw/text.hpp"

namespace tmw {

namespace {

using namespace std::chrono;

bool parse_fixed(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  std::from_chars(s.data() + pos, s.data() + pos + len, out);
  return true;
}

// Valid UTF-8 made only of XML 1.0 characters.
bool xml_representable(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    char32_t cp = 0;
    std::size_t len = 0;
    if (b0 < 0x80) {
      cp = b0;
      len = 1;
    } else if ((b0 & 0xE0) == 0xC0) {
      cp = b0 & 0x1F;
      len = 2;
    } else if ((b0 & 0xF0) == 0xE0) {
      cp = b0 & 0x0F;
      len = 3;
    } else if ((b0 & 0xF8) == 0xF0) {
      cp = b0 & 0x07;
      len = 4;
    } else {
      return false;
    }
    if (i + len > s.size()) return false;
    for (std::size_t k = 1; k < len; ++k) {
      const auto b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (b & 0x3F);
    }
    static constexpr char32_t kMinForLen[] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMinForLen[len]) return false;  // overlong
    const bool ok = cp == 0x9 || cp == 0xA || cp == 0xD || (cp >= 0x20 && cp <= 0xD7FF) ||
                    (cp >= 0xE000 && cp <= 0xFFFD) || (cp >= 0x10000 && cp <= 0x10FFFF);
    if (!ok) return false;
    i += len;
  }
  return true;
}

void escape_text(std::string& out, std::string_view s) {
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '\r': out += "&#13;"; break;
      default: out.push_back(c);
    }
  }
}

void escape_attr(std::string& out, std::string_view s) {
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      case '\t': out += "&#9;"; break;
      case '\n': out += "&#10;"; break;
      case '\r': out += "&#13;"; break;
      default: out.push_back(c);
    }
  }
}

void attr(std::string& out, std::string_view name, std::string_view value) {
  out.push_back(' ');
  out += name;
  out += "=\"";
  escape_attr(out, value);
  out.push_back('"');
}

using boost::property_tree::ptree;

const ptree* attributes_of(const ptree& node) {
  const auto it = node.find("<xmlattr>");
  return it == node.not_found() ? nullptr : &it->second;
}

// Rejects attributes outside `allowed` and returns them by name.
std::map<std::string, std::string> read_attributes(const ptree& node, const std::string& path,
                                                   std::initializer_list<std::string_view> allowed) {
  std::map<std::string, std::string> out;
  if (const ptree* attrs = attributes_of(node)) {
    for (const auto& [name, value] : *attrs) {
      if (std::find(allowed.begin(), allowed.end(), name) == allowed.end()) {
        throw LogFormatError(path, "unknown attribute '" + name + "'");
      }
      out[name] = value.data();
    }
  }
  for (const auto name : allowed) {
    if (out.count(std::string(name)) == 0) {
      throw LogFormatError(path, "missing attribute '" + std::string(name) + "'");
    }
  }
  return out;
}

bool blank(const std::string& s) { return s.find_first_not_of(" \t\r\n") == std::string::npos; }

// Child elements in document order, rejecting names outside `allowed` and
// non-whitespace text in the container itself.
std::vector<std::pair<std::string, const ptree*>> read_children(const ptree& node, const std::string& path,
                                                               std::initializer_list<std::string_view> allowed) {
  if (!blank(node.data())) throw LogFormatError(path, "unexpected text content");
  std::vector<std::pair<std::string, const ptree*>> out;
  for (const auto& [name, child] : node) {
    if (name == "<xmlattr>") continue;
    if (std::find(allowed.begin(), allowed.end(), name) == allowed.end()) {
      throw LogFormatError(path, "unknown element <" + name + ">");
    }
    out.emplace_back(name, &child);
  }
  return out;
}

std::size_t read_count(const std::map<std::string, std::string>& attrs, const std::string& name,
                       const std::string& path) {
  const std::string& s = attrs.at(name);
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw LogFormatError(path, "attribute '" + name + "' is not a non-negative integer: \"" + s + "\"");
  }
  return value;
}

Timestamp read_time(const std::map<std::string, std::string>& attrs, const std::string& name,
                    const std::string& path) {
  const auto t = parse_rfc3339(attrs.at(name));
  if (!t) throw LogFormatError(path, "attribute '" + name + "' is not an RFC 3339 timestamp");
  return *t;
}

std::string read_text_element(const ptree& node, const std::string& path) {
  if (const ptree* attrs = attributes_of(node); attrs != nullptr && !attrs->empty()) {
    throw LogFormatError(path, "unexpected attribute");
  }
  for (const auto& [name, child] : node) {
    if (name != "<xmlattr>") throw LogFormatError(path, "unknown element <" + name + ">");
  }
  return node.data();
}

}  // namespace

std::string format_rfc3339(Timestamp t) {
  const auto day = floor<days>(t);
  const year_month_day ymd{day};
  const hh_mm_ss<milliseconds> hms{t - day};
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()), static_cast<int>(hms.subseconds().count()));
  return buf;
}

std::optional<Timestamp> parse_rfc3339(std::string_view s) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
  if (!parse_fixed(s, 0, 4, y) || s.size() < 19 || s[4] != '-' || !parse_fixed(s, 5, 2, mo) || s[7] != '-' ||
      !parse_fixed(s, 8, 2, d) || (s[10] != 'T' && s[10] != 't') || !parse_fixed(s, 11, 2, h) ||
      s[13] != ':' || !parse_fixed(s, 14, 2, mi) || s[16] != ':' || !parse_fixed(s, 17, 2, sec)) {
    return std::nullopt;
  }
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || sec > 59) return std::nullopt;

  std::size_t pos = 19;
  int millis = 0;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    const std::size_t start = pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
      if (pos - start < 3) millis = millis * 10 + (s[pos] - '0');
      ++pos;
    }
    if (pos == start) return std::nullopt;
    for (std::size_t k = pos - start; k < 3; ++k) millis *= 10;
  }

  minutes offset{0};
  if (pos < s.size() && (s[pos] == 'Z' || s[pos] == 'z')) {
    ++pos;
  } else if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    int oh = 0, om = 0;
    if (!parse_fixed(s, pos + 1, 2, oh) || pos + 3 >= s.size() || s[pos + 3] != ':' ||
        !parse_fixed(s, pos + 4, 2, om) || oh > 23 || om > 59) {
      return std::nullopt;
    }
    offset = hours{oh} + minutes{om};
    if (s[pos] == '-') offset = -offset;
    pos += 6;
  } else {
    return std::nullopt;
  }
  if (pos != s.size()) return std::nullopt;

  return Timestamp{sys_days{ymd} + hours{h} + minutes{mi} + seconds{sec} + milliseconds{millis} - offset};
}

EditCounts count_edits(std::string_view initial, std::string_view final_text) {
  const Segment hyp = make_segment("initial", "", std::string(initial));
  const Segment ref = make_segment("final", "", std::string(final_text));
  const EditScript script = ter_align(hyp, ref);
  return EditCounts{script.insertions, script.deletions, script.substitutions, script.shifts};
}

EditLogRecord make_record(const Session& session, const std::string& segment_id, Origin origin,
                          std::string initial_text, std::string final_text, Timestamp started_at,
                          Timestamp finished_at) {
  if (segment_id.empty()) throw InvalidInput("segment id must not be empty");
  if (finished_at < started_at) {
    throw InvalidInput("finishedAt " + format_rfc3339(finished_at) + " precedes startedAt " +
                       format_rfc3339(started_at));
  }
  if (origin == Origin::Scratch && !initial_text.empty()) {
    throw InvalidInput("a SCRATCH record has no initial text");
  }
  if (!xml_representable(segment_id) || !xml_representable(initial_text) || !xml_representable(final_text)) {
    throw InvalidInput("text must be valid UTF-8 without control characters");
  }
  for (const auto& r : session.records) {
    if (r.segment_id == segment_id) {
      throw Conflict("segment " + segment_id + " already has a record in session " + session.session_id,
                     segment_id);
    }
  }

  EditLogRecord record;
  record.segment_id = segment_id;
  record.translator_id = session.translator_id;
  record.origin = origin;
  record.counts = count_edits(initial_text, final_text);
  record.initial_text = std::move(initial_text);
  record.final_text = std::move(final_text);
  record.started_at = started_at;
  record.finished_at = finished_at;
  record.edit_time_ms = (finished_at - started_at).count();
  return record;
}

void append_record(Session& session, EditLogRecord record) {
  for (const auto& r : session.records) {
    if (r.segment_id == record.segment_id) {
      throw Conflict("segment " + record.segment_id + " already has a record in session " + session.session_id,
                     record.segment_id);
    }
  }
  const auto pos = std::upper_bound(
      session.records.begin(), session.records.end(), record.finished_at,
      [](Timestamp t, const EditLogRecord& r) { return t < r.finished_at; });
  session.records.insert(pos, std::move(record));
}

const EditLogRecord& record_postedit(Session& session, const std::string& segment_id, Origin origin,
                                     std::string initial_text, std::string final_text, Timestamp started_at,
                                     Timestamp finished_at) {
  EditLogRecord record = make_record(session, segment_id, origin, std::move(initial_text), std::move(final_text),
                                     started_at, finished_at);
  const std::string id = record.segment_id;
  append_record(session, std::move(record));
  return *std::find_if(session.records.begin(), session.records.end(),
                       [&id](const EditLogRecord& r) { return r.segment_id == id; });
}

std::string export_xml(const Session& session) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<session";
  attr(out, "id", session.session_id);
  attr(out, "project", session.project_id);
  attr(out, "translator", session.translator_id);
  out += ">\n";
  if (session.records.empty()) {
    out += "  <records/>\n";
  } else {
    out += "  <records>\n";
    for (const auto& r : session.records) {
      out += "    <record";
      attr(out, "segment", r.segment_id);
      attr(out, "origin", to_string(r.origin));
      attr(out, "timeMs", std::to_string(r.edit_time_ms));
      attr(out, "ins", std::to_string(r.counts.insertions));
      attr(out, "del", std::to_string(r.counts.deletions));
      attr(out, "sub", std::to_string(r.counts.substitutions));
      attr(out, "shift", std::to_string(r.counts.shifts));
      attr(out, "started", format_rfc3339(r.started_at));
      attr(out, "finished", format_rfc3339(r.finished_at));
      out += ">\n      <initial>";
      escape_text(out, r.initial_text);
      out += "</initial>\n      <final>";
      escape_text(out, r.final_text);
      out += "</final>\n    </record>\n";
    }
    out += "  </records>\n";
  }
  out += "</session>\n";
  return out;
}

Session import_xml(std::string_view xml) {
  ptree doc;
  try {
    std::istringstream in{std::string(xml)};
    boost::property_tree::read_xml(in, doc, boost::property_tree::xml_parser::no_comments);
  } catch (const boost::property_tree::xml_parser_error& e) {
    throw LogFormatError("/", std::string("not well-formed XML: ") + e.message());
  }

  const auto top = read_children(doc, "/", {"session"});
  if (top.size() != 1) throw LogFormatError("/", "expected exactly one <session> element");

  const std::string session_path = "/session";
  const ptree& session_node = *top.front().second;
  const auto session_attrs = read_attributes(session_node, session_path, {"id", "project", "translator"});
  Session session;
  session.session_id = session_attrs.at("id");
  session.project_id = session_attrs.at("project");
  session.translator_id = session_attrs.at("translator");

  const auto session_children = read_children(session_node, session_path, {"records"});
  if (session_children.size() != 1) throw LogFormatError(session_path, "expected exactly one <records> element");
  const std::string records_path = session_path + "/records";
  const ptree& records_node = *session_children.front().second;
  if (const ptree* a = attributes_of(records_node); a != nullptr && !a->empty()) {
    throw LogFormatError(records_path, "unexpected attribute");
  }

  std::set<std::string> seen;
  std::size_t n = 0;
  for (const auto& [name, node] : read_children(records_node, records_path, {"record"})) {
    const std::string path = records_path + "/record[" + std::to_string(++n) + "]";
    const auto a = read_attributes(
        *node, path, {"segment", "origin", "timeMs", "ins", "del", "sub", "shift", "started", "finished"});

    EditLogRecord r;
    r.segment_id = a.at("segment");
    r.translator_id = session.translator_id;
    const auto origin = parse_origin(a.at("origin"));
    if (!origin || a.at("origin") != to_string(*origin)) {
      throw LogFormatError(path, "attribute 'origin' must be one of TM, MT, APE, SCRATCH");
    }
    r.origin = *origin;
    r.edit_time_ms = static_cast<std::int64_t>(read_count(a, "timeMs", path));
    r.counts.insertions = read_count(a, "ins", path);
    r.counts.deletions = read_count(a, "del", path);
    r.counts.substitutions = read_count(a, "sub", path);
    r.counts.shifts = read_count(a, "shift", path);
    r.started_at = read_time(a, "started", path);
    r.finished_at = read_time(a, "finished", path);
    if (r.finished_at < r.started_at) throw LogFormatError(path, "finished precedes started");
    if ((r.finished_at - r.started_at).count() != r.edit_time_ms) {
      throw LogFormatError(path, "timeMs disagrees with started/finished");
    }

    const auto children = read_children(*node, path, {"initial", "final"});
    if (children.size() != 2 || children[0].first != "initial" || children[1].first != "final") {
      throw LogFormatError(path, "expected <initial> followed by <final>");
    }
    r.initial_text = read_text_element(*children[0].second, path + "/initial");
    r.final_text = read_text_element(*children[1].second, path + "/final");
    if (r.origin == Origin::Scratch && !r.initial_text.empty()) {
      throw LogFormatError(path + "/initial", "a SCRATCH record has no initial text");
    }

    if (!seen.insert(r.segment_id).second) throw LogFormatError(path, "duplicate segment " + r.segment_id);
    if (!session.records.empty() && r.finished_at < session.records.back().finished_at) {
      throw LogFormatError(path, "records out of finished order");
    }
    session.records.push_back(std::move(r));
  }
  return session;
}

Alignment export_alignments(const EditLogRecord& record, const TmEntry* chosen_entry,
                            std::size_t source_token_count) {
  const auto final_tokens = tokenize(record.final_text);
  if (record.origin != Origin::TM || chosen_entry == nullptr) {
    return diagonal_alignment(source_token_count, final_tokens.size());
  }

  const auto initial_tokens = tokenize(record.initial_text);
  const Alignment& stored = chosen_entry->alignment.empty()
                                ? diagonal_alignment(chosen_entry->source.tokens.size(), initial_tokens.size())
                                : chosen_entry->alignment;

  std::vector<std::string> hyp;
  std::vector<std::string> ref;
  for (const auto& t : initial_tokens) hyp.push_back(t.norm);
  for (const auto& t : final_tokens) ref.push_back(t.norm);
  const EditScript script = ter_align(std::span<const std::string>(hyp), std::span<const std::string>(ref));

  std::vector<std::optional<std::size_t>> moved_to(initial_tokens.size());
  for (const auto& op : script.ops) {
    if ((op.kind == EditKind::Match || op.kind == EditKind::Substitute) && op.hyp_index && op.ref_index) {
      moved_to[*op.hyp_index] = *op.ref_index;
    }
  }

  Alignment out;
  for (const auto& link : stored) {
    if (link.target >= moved_to.size() || !moved_to[link.target]) continue;
    if (link.source >= chosen_entry->source.tokens.size()) continue;
    out.push_back({link.source, *moved_to[link.target]});
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace tmw
