#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <ostream>

#include "cuffdim/cli.hpp"

#ifndef CUFFDIM_VERSION
#define CUFFDIM_VERSION "0.0.0"
#endif

namespace cuffdim {

const char* version_string() { return CUFFDIM_VERSION; }

namespace {

void write_json(std::string& out, const Json& v) {
  switch (v.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += Json(it.key()).dump();
        out += ':';
        write_json(out, it.value());
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        write_json(out, v[i]);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float: {
      const double x = v.get<double>();
      if (!std::isfinite(x)) {
        out += "null";
      } else {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        out += buf;
      }
      break;
    }
    default:
      out += v.dump();
  }
}

}  // namespace

std::string json_line(const Json& value) {
  std::string out;
  write_json(out, value);
  return out;
}

double canonical_parameter(double x) { return std::round(x * 1e9) / 1e9; }

Ledger::Ledger(std::string path, std::ostream* warnings) : path_(std::move(path)), warnings_(warnings) {}

std::string Ledger::default_path() {
  if (const char* env = std::getenv("CUFFDIM_LEDGER"); env && *env) return env;
  return "cuffdim_ledger.jsonl";
}

std::optional<Json> Ledger::lookup(const std::string& kind, const Json& key) const {
  std::ifstream in(path_);
  if (!in) return std::nullopt;
  std::optional<Json> best;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    Json entry;
    try {
      entry = Json::parse(line);
      if (!entry.is_object() || !entry.contains("kind") || !entry.contains("key") || !entry.contains("depth") ||
          !entry.contains("results")) {
        throw std::runtime_error("missing fields");
      }
      if (entry["kind"] != kind || entry["key"] != key) continue;
      if (!best || entry["depth"].get<int>() > (*best)["depth"].get<int>()) best = entry;
    } catch (const std::exception&) {
      if (warnings_) *warnings_ << "warning: skipping corrupt ledger line " << number << " in " << path_ << '\n';
    }
  }
  return best;
}

void Ledger::append(const std::string& kind, const Json& key, int depth, const Json& results,
                    const Json& residuals) const {
  Json entry;
  entry["kind"] = kind;
  entry["key"] = key;
  entry["depth"] = depth;
  entry["results"] = results;
  entry["residuals"] = residuals;
  entry["version"] = version_string();
  const std::string line = json_line(entry) + '\n';
  const int fd = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
  if (fd < 0) throw Error("ledger: cannot open " + path_ + ": " + std::strerror(errno));
  if (::flock(fd, LOCK_EX) != 0) {
    ::close(fd);
    throw Error("ledger: cannot lock " + path_);
  }
  std::size_t written = 0;
  while (written < line.size()) {
    const ssize_t n = ::write(fd, line.data() + written, line.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      break;
    }
    written += static_cast<std::size_t>(n);
  }
  ::flock(fd, LOCK_UN);
  ::close(fd);
  if (written != line.size()) throw Error("ledger: write failed for " + path_);
}

}  // namespace cuffdim
