#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "mixlink/cli.hpp"

namespace mixlink::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

// Shortest round-trip representation; identical bytes for identical doubles.
std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw Error(ErrorCode::IoError, "cannot format number");
  return std::string(buf, ptr);
}

Table read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  Table t;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    if (t.header.empty()) {
      t.header = split(line);
      continue;
    }
    const auto cells = split(line);
    if (cells.size() != t.header.size())
      throw Error(ErrorCode::InvalidData, path + ":" + std::to_string(number) + ": expected " +
                                              std::to_string(t.header.size()) + " fields, found " +
                                              std::to_string(cells.size()));
    std::vector<double> row(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::string& s = cells[c];
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), row[c]);
      if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(row[c]))
        throw Error(ErrorCode::InvalidData, path + ":" + std::to_string(number) + ": column '" +
                                                t.header[c] + "' has invalid value '" + s + "'");
    }
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty()) throw Error(ErrorCode::InvalidData, path + ": missing header row");
  return t;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

void write_csv(const std::string& path, const Table& table) {
  std::string text;
  for (std::size_t c = 0; c < table.header.size(); ++c) text += (c ? "," : "") + table.header[c];
  text += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) text += (c ? "," : "") + format_number(row[c]);
    text += "\n";
  }
  write_text(path, text);
}

Dataset to_dataset(const Table& table, Family family, bool require_y) {
  Dataset data;
  const auto& h = table.header;
  std::size_t col = 0;
  const bool has_y = !h.empty() && h[0] == "y";
  if (require_y && !has_y) throw Error(ErrorCode::SchemaMismatch, "first column must be 'y'");
  if (has_y) ++col;
  const bool has_m = col < h.size() && h[col] == "m";
  if (family == Family::Binomial && !has_m)
    throw Error(ErrorCode::SchemaMismatch, "binomial data need an 'm' column after 'y'");
  if (has_m) ++col;
  const std::size_t first_x = col;
  for (std::size_t c = first_x; c < h.size(); ++c)
    if (h[c] != "x" + std::to_string(c - first_x + 1))
      throw Error(ErrorCode::SchemaMismatch, "column " + std::to_string(c + 1) + " is '" + h[c] +
                                                 "', expected 'x" + std::to_string(c - first_x + 1) + "'");
  const Eigen::Index n = static_cast<Eigen::Index>(table.rows.size());
  const Eigen::Index d = static_cast<Eigen::Index>(h.size() - first_x);
  data.X.resize(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = table.rows[static_cast<std::size_t>(i)];
    if (has_y) data.y.push_back(row[0]);
    if (has_m) data.m.push_back(row[has_y ? 1 : 0]);
    for (Eigen::Index k = 0; k < d; ++k) data.X(i, k) = row[first_x + static_cast<std::size_t>(k)];
  }
  if (!has_y) data.y.assign(static_cast<std::size_t>(n), 0.0);
  if (family != Family::Binomial) data.m.clear();
  return data;
}

Table from_dataset(const Dataset& data, Family family) {
  Table t;
  t.header.push_back("y");
  if (family == Family::Binomial) t.header.push_back("m");
  for (Eigen::Index k = 0; k < data.X.cols(); ++k) t.header.push_back("x" + std::to_string(k + 1));
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::vector<double> row{data.y[i]};
    if (family == Family::Binomial) row.push_back(data.m[i]);
    for (Eigen::Index k = 0; k < data.X.cols(); ++k) row.push_back(data.X(static_cast<Eigen::Index>(i), k));
    t.rows.push_back(std::move(row));
  }
  return t;
}

PosteriorDraws read_draws(const std::string& path, Family family, std::size_t d, std::size_t J) {
  const Table t = read_csv(path);
  PosteriorDraws draws;
  draws.family = family;
  draws.d = d;
  draws.J = J;
  draws.names = parameter_names(family, d, J);
  if (t.header.size() != draws.names.size())
    throw Error(ErrorCode::SchemaMismatch, path + ": expected " + std::to_string(draws.names.size()) +
                                               " columns for this config, found " +
                                               std::to_string(t.header.size()));
  for (std::size_t c = 0; c < t.header.size(); ++c)
    if (t.header[c] != draws.names[c])
      throw Error(ErrorCode::SchemaMismatch, path + ": column " + std::to_string(c + 1) + " is '" +
                                                 t.header[c] + "', expected '" + draws.names[c] + "'");
  draws.draws.resize(static_cast<Eigen::Index>(t.rows.size()),
                     static_cast<Eigen::Index>(draws.names.size()));
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    for (std::size_t c = 0; c < t.header.size(); ++c)
      draws.draws(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = t.rows[r][c];
  return draws;
}

void write_draws(const std::string& path, const PosteriorDraws& draws) {
  Table t;
  t.header = draws.names;
  for (Eigen::Index r = 0; r < draws.draws.rows(); ++r) {
    std::vector<double> row(static_cast<std::size_t>(draws.draws.cols()));
    for (Eigen::Index c = 0; c < draws.draws.cols(); ++c) row[static_cast<std::size_t>(c)] = draws.draws(r, c);
    t.rows.push_back(std::move(row));
  }
  write_csv(path, t);
}

}  // namespace mixlink::cli
