#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <string>

#include <json.hpp>

#include "kgqg/errors.hpp"
#include "kgqg/triple.hpp"

namespace kgqg {

using json = nlohmann::json;

// Stream a JSON Lines file record by record; memory stays proportional to
// one line. Blank lines are skipped. `fn(record, line_number)`.
inline void for_each_jsonl(const std::filesystem::path& path,
                           const std::function<void(const json&, std::size_t)>& fn) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw MalformedRecord(path.string(), lineno, std::string("invalid JSON: ") + e.what());
    }
    fn(rec, lineno);
  }
}

class JsonlWriter {
 public:
  explicit JsonlWriter(const std::filesystem::path& path) : path_(path.string()), out_(path) {
    if (!out_) throw IoError("cannot open " + path_ + " for writing");
  }

  void write(const json& rec) {
    out_ << rec.dump() << '\n';
    if (!out_) throw IoError("write failed: " + path_);
  }

  void close() {
    out_.close();
    if (out_.fail()) throw IoError("close failed: " + path_);
  }

 private:
  std::string path_;
  std::ofstream out_;
};

inline std::string require_string(const json& rec, const char* field,
                                  const std::string& file, std::size_t line) {
  auto it = rec.find(field);
  if (it == rec.end() || !it->is_string())
    throw MalformedRecord(file, line, std::string("missing string field '") + field + "'");
  return it->get<std::string>();
}

inline Triple triple_from_record(const json& rec, const std::string& file, std::size_t line) {
  auto t = Triple::try_make(require_string(rec, "s", file, line),
                            require_string(rec, "p", file, line),
                            require_string(rec, "o", file, line));
  if (!t) throw MalformedRecord(file, line, "triple has an empty component");
  return *t;
}

}  // namespace kgqg
