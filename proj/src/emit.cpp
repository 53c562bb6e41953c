/*
 * Copyright (c) 2026, The cvflab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cvflab/emit.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "cvflab/error.hpp"

namespace cvflab {

namespace {

using nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// A field value: text for CSV, and its JSON counterpart.
struct Field {
  std::string text;
  ordered_json json;
};

Field text(std::string s) { return {s, s}; }
Field integer(std::uint64_t v) { return {std::to_string(v), v}; }
Field signed_integer(std::int64_t v) { return {std::to_string(v), v}; }
Field real(double v) {
  std::string s = format_float(v);
  if (!std::isfinite(v)) return {s, nullptr};
  return {s, std::stod(s)};
}

class Table {
 public:
  Table(std::ostream& out, Format format, std::vector<std::string> columns)
      : out_(out), format_(format), columns_(std::move(columns)) {
    if (format_ == Format::kCsv) {
      for (std::size_t i = 0; i < columns_.size(); ++i) {
        out_ << (i ? "," : "") << columns_[i];
      }
      out_ << '\n';
    }
  }

  void row(const std::vector<Field>& fields) {
    if (format_ == Format::kCsv) {
      for (std::size_t i = 0; i < fields.size(); ++i) {
        out_ << (i ? "," : "") << fields[i].text;
      }
      out_ << '\n';
      return;
    }
    ordered_json obj = ordered_json::object();
    for (std::size_t i = 0; i < fields.size(); ++i) {
      obj[columns_[i]] = fields[i].json;
    }
    rows_.push_back(std::move(obj));
  }

  ~Table() {
    if (format_ == Format::kJson) out_ << rows_.dump(2) << '\n';
  }

 private:
  std::ostream& out_;
  Format format_;
  std::vector<std::string> columns_;
  ordered_json rows_ = ordered_json::array();
};

std::vector<Field> label_fields(const RunLabel& label) {
  return {text(label.program), text(label.topology), integer(label.n)};
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_real(const std::string& s) {
  if (s == "nan") return kNaN;
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorKind::kIo, "malformed number '" + s + "' in report CSV");
}

}  // namespace

Format parse_format(std::string_view text) {
  if (text == "csv") return Format::kCsv;
  if (text == "json") return Format::kJson;
  fail(ErrorKind::kUsage,
       "unknown format '" + std::string(text) + "' (expected csv or json)");
}

const char* extension(Format format) {
  return format == Format::kCsv ? ".csv" : ".json";
}

void write_reports(std::ostream& out, const RunLabel& label,
                   std::span<const AnalysisReport> reports, Format format) {
  Table table(out, format,
              {"program", "topology", "n", "rank_kind", "analysis_kind",
               "effect_prog", "effect_cvf", "rel_cvf", "fit_A", "fit_B",
               "fit_r2"});
  for (const auto& r : reports) {
    auto fields = label_fields(label);
    fields.push_back(text(to_string(r.rank_kind)));
    fields.push_back(text(to_string(r.analysis_kind)));
    fields.push_back(real(r.effect_prog));
    fields.push_back(real(r.effect_cvf));
    fields.push_back(real(r.rel_cvf));
    fields.push_back(real(r.fit ? r.fit->A : kNaN));
    fields.push_back(real(r.fit ? r.fit->B : kNaN));
    fields.push_back(real(r.fit ? r.fit->r2 : kNaN));
    table.row(fields);
  }
}

void write_histograms(std::ostream& out,
                      std::span<const RankEffectHistogram> histograms,
                      Format format) {
  Table table(out, format,
              {"rank_effect", "count", "fraction", "source", "rank_kind"});
  for (const auto& h : histograms) {
    for (const auto& [bin, cell] : h.bins) {
      table.row({signed_integer(bin), integer(cell.count), real(cell.fraction),
                 text(to_string(h.source)), text(to_string(h.rank_kind))});
    }
  }
}

void write_simulation(std::ostream& out, const RunLabel& label,
                      std::span<const SimOutcome> outcomes, Format format) {
  Table table(out, format,
              {"program", "topology", "n", "initial_state_index",
               "cvf_interval", "baseline_steps", "convergence_steps",
               "converged_runs", "ratio"});
  for (const auto& o : outcomes) {
    auto fields = label_fields(label);
    fields.push_back(text(o.initial_state_index));
    fields.push_back(integer(o.cvf_interval));
    fields.push_back(real(o.baseline_steps));
    fields.push_back(real(o.convergence_steps));
    fields.push_back(integer(o.converged_runs));
    fields.push_back(real(o.ratio));
    table.row(fields);
  }
}

void write_scatter(std::ostream& out, const RunLabel& label,
                   std::span<const SimOutcome> outcomes, Format format) {
  Table table(out, format,
              {"program", "topology", "n", "initial_state_index",
               "cvf_interval", "run", "baseline_steps", "convergence_steps",
               "baseline_converged", "converged"});
  for (const auto& o : outcomes) {
    for (std::size_t r = 0; r < o.runs.size(); ++r) {
      auto fields = label_fields(label);
      fields.push_back(text(o.initial_state_index));
      fields.push_back(integer(o.cvf_interval));
      fields.push_back(integer(r));
      fields.push_back(integer(o.baseline_runs.at(r).steps));
      fields.push_back(integer(o.runs[r].steps));
      fields.push_back(integer(o.baseline_runs[r].converged));
      fields.push_back(integer(o.runs[r].converged));
      table.row(fields);
    }
  }
}

void write_file(const std::filesystem::path& path,
                const std::function<void(std::ostream&)>& body) {
  std::ostringstream buffer;
  body(buffer);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "cannot open " + path.string() + " for writing");
  const std::string data = buffer.str();
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  out.close();
  if (!out) fail(ErrorKind::kIo, "failed writing " + path.string());
}

std::vector<ReportRow> read_reports_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::kIo, "empty report CSV");
  if (line != "program,topology,n,rank_kind,analysis_kind,effect_prog,"
              "effect_cvf,rel_cvf,fit_A,fit_B,fit_r2") {
    fail(ErrorKind::kIo, "unexpected report CSV header: " + line);
  }
  std::vector<ReportRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 11) {
      fail(ErrorKind::kIo, "report CSV row has " +
                               std::to_string(cells.size()) +
                               " fields, expected 11");
    }
    ReportRow row;
    row.label = {cells[0], cells[1],
                 static_cast<std::size_t>(parse_real(cells[2]))};
    row.rank_kind = cells[3];
    row.analysis_kind = cells[4];
    row.effect_prog = parse_real(cells[5]);
    row.effect_cvf = parse_real(cells[6]);
    row.rel_cvf = parse_real(cells[7]);
    row.fit_A = parse_real(cells[8]);
    row.fit_B = parse_real(cells[9]);
    row.fit_r2 = parse_real(cells[10]);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace cvflab
