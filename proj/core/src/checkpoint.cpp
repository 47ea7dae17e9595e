#include "sqrd/checkpoint.hpp"

#include <algorithm>
#include <sstream>

#include "sqrd/report.hpp"

namespace sqrd {

namespace {

using report::json;

struct RawLine {
  std::string text;
  std::size_t offset = 0;
};

// Splits on '\n', keeping byte offsets. A final line without a terminator is
// still returned; blank lines are dropped.
std::vector<RawLine> split_lines(const std::string& buf) {
  std::vector<RawLine> lines;
  std::size_t pos = 0;
  while (pos < buf.size()) {
    std::size_t nl = buf.find('\n', pos);
    std::size_t end = nl == std::string::npos ? buf.size() : nl;
    if (end > pos) lines.push_back(RawLine{buf.substr(pos, end - pos), pos});
    pos = end + 1;
  }
  return lines;
}

[[noreturn]] void corrupt(std::size_t offset, const std::string& what) {
  throw CheckpointError("checkpoint corrupt at byte offset " +
                        std::to_string(offset) + ": " + what);
}

}  // namespace

CheckpointState load_checkpoint(const std::string& path,
                                const std::string& canonical_config) {
  CheckpointState state;
  std::ifstream in(path, std::ios::binary);
  if (!in) return state;  // no file yet: normal first run

  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string content = buf.str();
  if (content.empty()) {
    state.warnings.push_back("checkpoint file is empty; starting from scratch");
    return state;
  }

  std::vector<RawLine> lines = split_lines(content);
  if (lines.empty()) {
    state.warnings.push_back("checkpoint file is blank; starting from scratch");
    return state;
  }

  auto parse_or_drop = [&](std::size_t i, json& out) {
    out = json::parse(lines[i].text, nullptr, false);
    if (!out.is_discarded()) return true;
    if (i + 1 == lines.size()) {
      state.warnings.push_back("dropped truncated final checkpoint record");
      return false;
    }
    corrupt(lines[i].offset, "unparseable record");
  };

  json header;
  if (!parse_or_drop(0, header)) {
    state.warnings.push_back("checkpoint held no complete header; starting from scratch");
    return state;
  }
  if (!header.is_object() || !header.contains("config") ||
      !header.contains("version"))
    corrupt(lines[0].offset, "first record is not a header");
  if (header.at("version") != report::kVersion)
    throw CheckpointError("checkpoint version mismatch: file has " +
                          header.at("version").dump() + ", this tool is " +
                          std::string(report::kVersion));
  if (header.at("config") != canonical_config)
    throw CheckpointError(
        "checkpoint config mismatch:\n  checkpoint: " +
        header.at("config").get<std::string>() +
        "\n  requested:  " + canonical_config);
  state.fresh = false;

  for (std::size_t i = 1; i < lines.size(); ++i) {
    json rec;
    if (!parse_or_drop(i, rec)) break;
    if (state.complete)
      corrupt(lines[i].offset, "record after the completion marker");
    if (!rec.is_object()) corrupt(lines[i].offset, "record is not an object");
    if (rec.contains("complete")) {
      if (rec.at("complete") != json(true))
        corrupt(lines[i].offset, "bad completion marker");
      state.complete = true;
      continue;
    }
    if (!rec.contains("z_done") || !rec.contains("hits") || !rec.contains("scanned"))
      corrupt(lines[i].offset, "progress record is missing fields");
    std::int64_t z = 0;
    try {
      z = report::parse_int(rec.at("z_done")).to_int64();
      state.points_scanned += report::parse_int(rec.at("scanned"));
    } catch (const std::exception& e) {
      corrupt(lines[i].offset, e.what());
    }
    if (z <= state.last_z)
      corrupt(lines[i].offset, "z_done does not increase");
    if (!rec.at("hits").is_array())
      corrupt(lines[i].offset, "hits is not an array");
    for (const json& obj : rec.at("hits")) {
      std::int64_t hz = 0, hx = 0, hy = 0;
      try {
        hz = report::parse_int(obj.at("z")).to_int64();
        hx = report::parse_int(obj.at("x")).to_int64();
        hy = report::parse_int(obj.at("y")).to_int64();
      } catch (const std::exception& e) {
        corrupt(lines[i].offset, e.what());
      }
      if (hz != z) corrupt(lines[i].offset, "hit belongs to a different z");
      PointProfile p = classify_point(hz, hx, hy);
      if (report::hit_record(p) != obj)
        corrupt(lines[i].offset, "stored hit does not re-validate");
      (p.rational_count == 4 ? state.hits4 : state.hits3).push_back(p);
    }
    state.last_z = z;
  }
  return state;
}

CheckpointWriter::CheckpointWriter(const std::string& path,
                                   const std::string& canonical_config,
                                   bool resume) {
  out_.open(path, resume ? std::ios::app : std::ios::trunc);
  if (!out_)
    throw CheckpointError("cannot open checkpoint for writing: " + path);
  if (!resume) {
    out_ << report::line(report::header_record(canonical_config)) << '\n';
    out_.flush();
  }
}

void CheckpointWriter::z_done(std::int64_t z,
                              const std::vector<PointProfile>& hits3,
                              const std::vector<PointProfile>& hits4,
                              Int128 scanned) {
  json rec;
  rec["z_done"] = z;
  std::vector<const PointProfile*> merged;
  for (const PointProfile& p : hits3) merged.push_back(&p);
  for (const PointProfile& p : hits4) merged.push_back(&p);
  std::sort(merged.begin(), merged.end(),
            [](const PointProfile* a, const PointProfile* b) {
              return std::pair(a->x, a->y) < std::pair(b->x, b->y);
            });
  json hits = json::array();
  for (const PointProfile* p : merged) hits.push_back(report::hit_record(*p));
  rec["hits"] = std::move(hits);
  rec["scanned"] = report::int_value(scanned);
  out_ << report::line(rec) << '\n';
  out_.flush();
  if (!out_) throw CheckpointError("checkpoint write failed");
}

void CheckpointWriter::complete() {
  json rec;
  rec["complete"] = true;
  out_ << report::line(rec) << '\n';
  out_.flush();
  if (!out_) throw CheckpointError("checkpoint write failed");
}

}  // namespace sqrd
