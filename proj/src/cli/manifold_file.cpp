#include "tvb/cli/manifold_file.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace tvb::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

struct Line {
  std::string_view text;
  std::size_t offset = 0;
  int number = 0;
};

[[noreturn]] void fail(const Line& line, const std::string& msg, std::size_t column = 0) {
  throw ParseError("line " + std::to_string(line.number) + ": " + msg, line.offset + column);
}

struct Entry {
  std::string text;
  Line line;
  std::size_t column = 0;
};

}  // namespace

std::vector<double> parse_point(std::string_view text) {
  std::vector<double> out;
  if (trim(text).empty()) throw std::invalid_argument("malformed point: empty");
  for (std::string_view item : split(text, ',')) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size() || !std::isfinite(v)) {
      throw std::invalid_argument("malformed point '" + std::string(text) + "': bad coordinate '" +
                                  std::string(item) + "'");
    }
    out.push_back(v);
  }
  return out;
}

ManifoldFile parse_manifold(std::string_view text, const std::string& default_name) {
  ManifoldFile mf;
  mf.spec.name = default_name;
  int dim = 0;
  bool have_coords = false;
  std::optional<std::pair<std::string, Line>> domain;
  std::map<std::pair<int, int>, Entry> g_entries;
  std::map<std::pair<int, int>, Entry> J_entries;

  std::size_t pos = 0;
  int number = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    Line line{text.substr(pos, end - pos), pos, ++number};
    pos = end + 1;

    std::string_view body = line.text;
    if (const std::size_t hash = body.find('#'); hash != std::string_view::npos) {
      body = body.substr(0, hash);
    }
    body = trim(body);
    if (body.empty()) continue;
    const std::size_t eq = body.find('=');
    if (eq == std::string_view::npos) fail(line, "expected 'key = value'");
    const std::string_view key = trim(body.substr(0, eq));
    std::string_view value = trim(body.substr(eq + 1));
    const std::size_t value_col = static_cast<std::size_t>(value.data() - line.text.data());

    if (key == "name") {
      if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
      mf.spec.name = std::string(value);
    } else if (key == "dim") {
      int d = 0;
      const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), d);
      if (ec != std::errc() || ptr != value.data() + value.size()) fail(line, "dim must be an integer", value_col);
      if (d < 4 || d % 2 != 0) fail(line, "dim must be even and >= 4", value_col);
      if (dim != 0) fail(line, "duplicate dim");
      dim = d;
    } else if (key == "coords") {
      if (have_coords) fail(line, "duplicate coords");
      for (std::string_view c : split(value, ',')) {
        if (!is_identifier(c)) fail(line, "bad coordinate name '" + std::string(c) + "'", value_col);
        for (const auto& prev : mf.spec.coords)
          if (prev == c) fail(line, "duplicate coordinate '" + std::string(c) + "'", value_col);
        mf.spec.coords.emplace_back(c);
      }
      have_coords = true;
    } else if (key == "domain") {
      if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
      domain = {std::string(value), line};
    } else if (key == "probe") {
      try {
        mf.probe = parse_point(value);
      } catch (const std::invalid_argument& e) {
        fail(line, e.what(), value_col);
      }
    } else if (key.size() > 1 && (key[0] == 'g' || key[0] == 'J') && key[1] == '[') {
      // g[i][j]
      int idx[2] = {0, 0};
      std::size_t p = 1;
      for (int k = 0; k < 2; ++k) {
        if (p >= key.size() || key[p] != '[') fail(line, "expected '[' in '" + std::string(key) + "'");
        const std::size_t close = key.find(']', p);
        if (close == std::string_view::npos) fail(line, "expected ']' in '" + std::string(key) + "'");
        const std::string_view num = trim(key.substr(p + 1, close - p - 1));
        const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), idx[k]);
        if (num.empty() || ec != std::errc() || ptr != num.data() + num.size()) {
          fail(line, "bad index in '" + std::string(key) + "'");
        }
        p = close + 1;
      }
      if (p != key.size()) fail(line, "trailing characters in '" + std::string(key) + "'");
      if (dim == 0 || !have_coords) fail(line, "dim and coords must precede component lines");
      if (idx[0] < 1 || idx[0] > dim || idx[1] < 1 || idx[1] > dim) {
        fail(line, "index out of range 1.." + std::to_string(dim) + " in '" + std::string(key) + "'");
      }
      std::size_t col = value_col;
      if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
        value = value.substr(1, value.size() - 2);
        ++col;
      } else if (!value.empty() && value.front() == '"') {
        fail(line, "unterminated string", value_col);
      }
      auto& table = key[0] == 'g' ? g_entries : J_entries;
      const auto slot = std::make_pair(idx[0] - 1, idx[1] - 1);
      if (table.count(slot)) fail(line, "duplicate entry '" + std::string(key) + "'");
      table[slot] = Entry{std::string(value), line, col};
    } else {
      fail(line, "unknown key '" + std::string(key) + "'");
    }
  }

  if (dim == 0) throw ParseError("missing 'dim'", 0);
  if (!have_coords) throw ParseError("missing 'coords'", 0);
  if (static_cast<int>(mf.spec.coords.size()) != dim) {
    throw ParseError("coords lists " + std::to_string(mf.spec.coords.size()) + " names but dim = " +
                     std::to_string(dim), 0);
  }
  if (g_entries.empty()) throw ParseError("no metric components given", 0);
  if (mf.probe && static_cast<int>(mf.probe->size()) != dim) throw ParseError("probe has wrong number of coordinates", 0);

  const auto parse_entry = [&](const Entry& e) {
    try {
      return parse(e.text, mf.spec.coords);
    } catch (const ParseError& err) {
      fail(e.line, err.what(), e.column + err.offset());
    }
  };

  if (domain) {
    try {
      mf.spec.domain = Domain::parse(domain->first, mf.spec.coords);
    } catch (const ParseError& err) {
      fail(domain->second, std::string("domain: ") + err.what());
    }
  }

  const std::size_t dd = static_cast<std::size_t>(dim) * dim;
  mf.spec.g.assign(dd, Expr());
  mf.spec.J.assign(dd, Expr());
  for (const auto& [slot, entry] : g_entries) {
    mf.spec.g[static_cast<std::size_t>(slot.first * dim + slot.second)] = parse_entry(entry);
  }
  for (const auto& [slot, entry] : g_entries) {
    const auto mirror = std::make_pair(slot.second, slot.first);
    const Expr& here = mf.spec.g[static_cast<std::size_t>(slot.first * dim + slot.second)];
    if (g_entries.count(mirror)) {
      const Expr& there = mf.spec.g[static_cast<std::size_t>(mirror.first * dim + mirror.second)];
      if (!(here.simplify() == there.simplify())) {
        fail(entry.line, "g[" + std::to_string(slot.first + 1) + "][" + std::to_string(slot.second + 1) +
                             "] differs from its transpose");
      }
    } else {
      mf.spec.g[static_cast<std::size_t>(mirror.first * dim + mirror.second)] = here;
    }
  }
  for (const auto& [slot, entry] : J_entries) {
    mf.spec.J[static_cast<std::size_t>(slot.first * dim + slot.second)] = parse_entry(entry);
  }
  return mf;
}

Chart load_manifold(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read manifold file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string name = path;
  if (const std::size_t slash = name.find_last_of('/'); slash != std::string::npos) name = name.substr(slash + 1);
  return build_chart(parse_manifold(buf.str(), name));
}

Chart build_chart(ManifoldFile mf) {
  std::optional<Chart> built;
  try {
    built.emplace(std::move(mf.spec));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), 0);
  }
  Chart chart = std::move(*built);
  if (mf.probe) chart.check_point(*mf.probe);
  return chart;
}

}  // namespace tvb::cli
