// Copyright 2026 The bab Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bab/report.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "bab/errors.h"
#include "json_util.h"

namespace bab {
namespace {

using internal::OrderedJson;
using internal::Round4;

// ---- building ---------------------------------------------------------------

SplitRow MakeSplitRow(const SplitEvidence& ev) {
  SplitRow row;
  row.index = ev.index;
  row.n_observations = ev.n_observations;
  row.chi_square_p = Round4(ev.nominal.p_value);
  row.chi_square_significant = ev.nominal_significant;
  row.test = std::string(TestKindName(ev.two_sided.test));
  row.statistic = Round4(ev.two_sided.statistic);
  row.p_value = Round4(ev.two_sided.p_value);
  row.effect_size = Round4(ev.two_sided.effect_size);
  row.power = Round4(ev.two_sided.power);
  if (ev.directional) row.directional_p = Round4(ev.directional->p_value);
  row.direction = ev.direction;
  row.pcr_direction = ev.pcr.direction;
  return row;
}

VerdictRow MakeVerdictRow(const BiasVerdict& v) {
  VerdictRow row;
  row.model_id = v.model_id;
  row.model_base = v.model_base;
  row.dataset_id = v.dataset_id;
  row.direction = v.direction;
  row.directional_splits = {v.DirectionalCount(v.categories[0]),
                            v.DirectionalCount(v.categories[1])};
  row.nominal_related = v.nominal_related;
  row.nominal_significant_splits = v.nominal_significant_splits;
  if (v.nominal_full) row.nominal_full_p = Round4(v.nominal_full->p_value);
  for (const auto& ev : v.split_evidence) row.splits.push_back(MakeSplitRow(ev));
  return row;
}

PcmSet RoundPcm(const PcmSet& p) {
  return {Round4(p.signed_mean), Round4(p.abs_mean), Round4(p.signed_sum), p.n_pairs};
}

TestResult RoundTest(const TestResult& t) {
  TestResult r;
  r.test = t.test;
  r.statistic = Round4(t.statistic);
  r.p_value = Round4(t.p_value);
  r.n = t.n;
  r.effect_size = Round4(t.effect_size);
  r.power = Round4(t.power);
  r.df = t.df;
  r.degenerate = t.degenerate;
  return r;
}

// ---- JSON -------------------------------------------------------------------

OrderedJson OptionalNumber(const std::optional<double>& x) {
  return x ? OrderedJson(Round4(*x)) : OrderedJson(nullptr);
}

OrderedJson ToJson(const SplitRow& s) {
  OrderedJson j;
  j["index"] = s.index;
  j["n_observations"] = s.n_observations;
  j["chi_square_p"] = Round4(s.chi_square_p);
  j["chi_square_significant"] = s.chi_square_significant;
  j["test"] = s.test;
  j["statistic"] = Round4(s.statistic);
  j["p_value"] = Round4(s.p_value);
  j["effect_size"] = Round4(s.effect_size);
  j["power"] = Round4(s.power);
  j["directional_p"] = OptionalNumber(s.directional_p);
  j["direction"] = s.direction;
  j["pcr_direction"] = s.pcr_direction;
  return j;
}

OrderedJson ToJson(const PcmSet& p) {
  OrderedJson j;
  j["signed_mean"] = Round4(p.signed_mean);
  j["abs_mean"] = Round4(p.abs_mean);
  j["signed_sum"] = Round4(p.signed_sum);
  j["n_pairs"] = p.n_pairs;
  return j;
}

OrderedJson ToJson(const VerdictRow& v) {
  OrderedJson j;
  j["model_id"] = v.model_id;
  j["model_base"] = v.model_base;
  j["dataset_id"] = v.dataset_id;
  j["direction"] = v.direction;
  j["directional_splits"] = v.directional_splits;
  j["nominal_related"] = v.nominal_related;
  j["nominal_significant_splits"] = v.nominal_significant_splits;
  j["nominal_full_p"] = OptionalNumber(v.nominal_full_p);
  j["splits"] = OrderedJson::array();
  for (const auto& s : v.splits) j["splits"].push_back(ToJson(s));
  return j;
}

OrderedJson ToJson(const HeatCell& c) {
  OrderedJson j;
  j["model_base"] = c.model_base;
  j["dataset_id"] = c.dataset_id;
  j["counts"] = c.counts;
  j["ties"] = c.ties;
  j["heat"] = c.HeatValue();
  OrderedJson cons;
  cons["kind"] = std::string(ConsistencyKindName(c.consistency.kind));
  cons["category"] = c.consistency.category;
  cons["count"] = c.consistency.count;
  cons["total"] = c.consistency.total;
  j["consistency"] = cons;
  j["pcm"] = ToJson(c.pcm);
  j["verdict_direction"] = c.verdict_direction;
  return j;
}

OrderedJson ToJson(const TestResult& t) {
  OrderedJson j;
  j["test"] = std::string(TestKindName(t.test));
  j["statistic"] = Round4(t.statistic);
  j["df"] = OptionalNumber(t.df);
  j["p_value"] = Round4(t.p_value);
  j["n"] = t.n;
  j["effect_size"] = Round4(t.effect_size);
  j["power"] = Round4(t.power);
  j["degenerate"] = t.degenerate;
  return j;
}

OrderedJson ToJson(const Rq2Result& r) {
  OrderedJson j;
  j["row_labels"] = r.row_labels;
  j["column_labels"] = r.column_labels;
  OrderedJson table = OrderedJson::array();
  for (int i = 0; i < r.table.rows; ++i) {
    OrderedJson row = OrderedJson::array();
    for (int k = 0; k < r.table.cols; ++k) row.push_back(r.table.at(i, k));
    table.push_back(row);
  }
  j["table"] = table;
  j["test"] = ToJson(r.test);
  j["models"] = r.models;
  return j;
}

OrderedJson ToJson(const DimensionReport& d) {
  OrderedJson j;
  j["dimension"] = d.dimension;
  j["categories"] = d.categories;
  OrderedJson summary;
  summary["total"] = d.summary.total;
  summary["rows"] = OrderedJson::array();
  for (const auto& r : d.summary.rows) {
    OrderedJson row;
    row["direction"] = r.direction;
    row["count"] = r.count;
    row["percent"] = r.percent;
    summary["rows"].push_back(row);
  }
  j["summary"] = summary;
  j["verdicts"] = OrderedJson::array();
  for (const auto& v : d.verdicts) j["verdicts"].push_back(ToJson(v));
  OrderedJson heat;
  heat["bases"] = d.heatmap.bases;
  heat["datasets"] = d.heatmap.datasets;
  heat["cells"] = OrderedJson::array();
  for (const auto& c : d.heatmap.cells) heat["cells"].push_back(ToJson(c));
  j["heatmap"] = heat;
  if (d.rq2) j["rq2"] = ToJson(*d.rq2);
  return j;
}

OrderedJson ToJson(const AuditReport& r) {
  OrderedJson j;
  j["schema_version"] = r.schema_version;
  j["config"] = internal::ConfigToJson(r.config);
  OrderedJson prov;
  prov["corpus_id"] = r.provenance.corpus_id;
  prov["corpus_digest"] = r.provenance.corpus_digest;
  prov["model_ids"] = r.provenance.model_ids;
  prov["seed"] = r.config.seed;
  prov["toolkit_version"] = r.provenance.toolkit_version;
  j["provenance"] = prov;
  j["dimensions"] = OrderedJson::array();
  for (const auto& d : r.dimensions) j["dimensions"].push_back(ToJson(d));
  return j;
}

using Json = nlohmann::json;

std::optional<double> OptionalFrom(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

ConsistencyKind ParseConsistencyKind(const std::string& name) {
  for (auto k : {ConsistencyKind::kConstant, ConsistencyKind::kLeaning, ConsistencyKind::kMixed}) {
    if (ConsistencyKindName(k) == name) return k;
  }
  throw ValidationError("unknown consistency kind '" + name + "'");
}

PcmSet PcmFrom(const Json& j) {
  return {j.at("signed_mean").get<double>(), j.at("abs_mean").get<double>(),
          j.at("signed_sum").get<double>(), j.at("n_pairs").get<std::int64_t>()};
}

TestResult TestFrom(const Json& j) {
  TestResult t;
  t.test = ParseTestKind(j.at("test").get<std::string>());
  t.statistic = j.at("statistic").get<double>();
  t.df = OptionalFrom(j.at("df"));
  t.p_value = j.at("p_value").get<double>();
  t.n = j.at("n").get<std::int64_t>();
  t.effect_size = j.at("effect_size").get<double>();
  t.power = j.at("power").get<double>();
  t.degenerate = j.at("degenerate").get<bool>();
  return t;
}

DimensionReport DimensionFrom(const Json& j) {
  DimensionReport d;
  d.dimension = j.at("dimension").get<std::string>();
  d.categories = j.at("categories").get<std::array<std::string, 2>>();

  const Json& summary = j.at("summary");
  d.summary.dimension = d.dimension;
  d.summary.total = summary.at("total").get<int>();
  for (const auto& r : summary.at("rows")) {
    d.summary.rows.push_back({r.at("direction").get<std::string>(), r.at("count").get<int>(),
                              r.at("percent").get<int>()});
  }

  for (const auto& v : j.at("verdicts")) {
    VerdictRow row;
    row.model_id = v.at("model_id").get<std::string>();
    row.model_base = v.at("model_base").get<std::string>();
    row.dataset_id = v.at("dataset_id").get<std::string>();
    row.direction = v.at("direction").get<std::string>();
    row.directional_splits = v.at("directional_splits").get<std::array<int, 2>>();
    row.nominal_related = v.at("nominal_related").get<bool>();
    row.nominal_significant_splits = v.at("nominal_significant_splits").get<int>();
    row.nominal_full_p = OptionalFrom(v.at("nominal_full_p"));
    for (const auto& s : v.at("splits")) {
      SplitRow sr;
      sr.index = s.at("index").get<int>();
      sr.n_observations = s.at("n_observations").get<std::int64_t>();
      sr.chi_square_p = s.at("chi_square_p").get<double>();
      sr.chi_square_significant = s.at("chi_square_significant").get<bool>();
      sr.test = s.at("test").get<std::string>();
      sr.statistic = s.at("statistic").get<double>();
      sr.p_value = s.at("p_value").get<double>();
      sr.effect_size = s.at("effect_size").get<double>();
      sr.power = s.at("power").get<double>();
      sr.directional_p = OptionalFrom(s.at("directional_p"));
      sr.direction = s.at("direction").get<std::string>();
      sr.pcr_direction = s.at("pcr_direction").get<std::string>();
      row.splits.push_back(std::move(sr));
    }
    d.verdicts.push_back(std::move(row));
  }

  const Json& heat = j.at("heatmap");
  d.heatmap.dimension = d.dimension;
  d.heatmap.categories = d.categories;
  d.heatmap.bases = heat.at("bases").get<std::vector<std::string>>();
  d.heatmap.datasets = heat.at("datasets").get<std::vector<std::string>>();
  for (const auto& c : heat.at("cells")) {
    HeatCell cell;
    cell.model_base = c.at("model_base").get<std::string>();
    cell.dataset_id = c.at("dataset_id").get<std::string>();
    cell.counts = c.at("counts").get<std::array<int, 2>>();
    cell.ties = c.at("ties").get<int>();
    const Json& cons = c.at("consistency");
    cell.consistency.kind = ParseConsistencyKind(cons.at("kind").get<std::string>());
    cell.consistency.category = cons.at("category").get<std::string>();
    cell.consistency.count = cons.at("count").get<int>();
    cell.consistency.total = cons.at("total").get<int>();
    cell.pcm = PcmFrom(c.at("pcm"));
    cell.verdict_direction = c.at("verdict_direction").get<std::string>();
    d.heatmap.cells.push_back(std::move(cell));
  }

  if (j.contains("rq2")) {
    const Json& r = j.at("rq2");
    Rq2Result rq2;
    rq2.dimension = d.dimension;
    rq2.row_labels = r.at("row_labels").get<std::vector<std::string>>();
    rq2.column_labels = r.at("column_labels").get<std::vector<std::string>>();
    const auto rows = r.at("table").get<std::vector<std::vector<std::int64_t>>>();
    rq2.table = ContingencyTable(static_cast<int>(rows.size()),
                                 rows.empty() ? 0 : static_cast<int>(rows[0].size()));
    for (size_t i = 0; i < rows.size(); ++i) {
      if (static_cast<int>(rows[i].size()) != rq2.table.cols) {
        throw ValidationError("rq2 table rows have unequal lengths");
      }
      for (size_t k = 0; k < rows[i].size(); ++k) {
        rq2.table.at(static_cast<int>(i), static_cast<int>(k)) = rows[i][k];
      }
    }
    rq2.test = TestFrom(r.at("test"));
    rq2.models = r.at("models").get<std::vector<std::string>>();
    d.rq2 = std::move(rq2);
  }
  return d;
}

// ---- CSV and markdown ---------------------------------------------------------

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string RenderCsv(const AuditReport& report) {
  std::set<std::string> base_set;
  for (const auto& d : report.dimensions) base_set.insert(d.heatmap.bases.begin(), d.heatmap.bases.end());
  std::ostringstream out;
  out << "schema_version,dimension,category_a,category_b,dataset";
  for (const auto& b : base_set) out << "," << CsvField(b + ":a") << "," << CsvField(b + ":b");
  out << "\n";
  for (const auto& d : report.dimensions) {
    for (const auto& ds : d.heatmap.datasets) {
      out << report.schema_version << "," << CsvField(d.dimension) << ","
          << CsvField(d.categories[0]) << "," << CsvField(d.categories[1]) << ","
          << CsvField(ds);
      for (const auto& b : base_set) {
        if (const HeatCell* c = d.heatmap.Find(b, ds)) {
          out << "," << c->counts[0] << "," << c->counts[1];
        } else {
          out << ",,";
        }
      }
      out << "\n";
    }
  }
  return out.str();
}

std::string Fixed4(double x) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(4);
  s << Round4(x);
  return s.str();
}

std::string MdCell(std::string s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

void RenderDirectionTable(const DimensionReport& d, std::ostringstream& out) {
  out << "| Direction |";
  for (const auto& b : d.heatmap.bases) out << " " << MdCell(b) << " |";
  out << "\n|---|";
  for (size_t i = 0; i < d.heatmap.bases.size(); ++i) out << "---|";
  out << "\n";
  const std::array<std::string, 3> directions = {d.categories[0], d.categories[1],
                                                 std::string(kNoDirection)};
  for (const auto& dir : directions) {
    out << "| " << (dir == kNoDirection ? std::string("no/rare") : "toward " + MdCell(dir))
        << " |";
    for (const auto& b : d.heatmap.bases) {
      std::vector<std::string> ids;
      for (const auto& v : d.verdicts) {
        if (v.model_base == b && v.direction == dir) ids.push_back(v.dataset_id);
      }
      out << " " << (ids.empty() ? std::string("-") : MdCell(CompressIds(ids)))
          << " (n=" << ids.size() << ") |";
    }
    out << "\n";
  }
  out << "\nSummary over " << d.summary.total << " models:";
  for (size_t i = 0; i < d.summary.rows.size(); ++i) {
    const auto& r = d.summary.rows[i];
    out << (i == 0 ? " " : "; ")
        << (r.direction == kNoDirection ? std::string("no/rare") : "toward " + r.direction)
        << " " << r.count << " (" << r.percent << "%)";
  }
  out << "\n";
}

void RenderMetricTable(const DimensionReport& d, std::ostringstream& out) {
  out << "| ID | Model | PCM signed mean | PCM abs mean | PCR (" << MdCell(d.categories[0])
      << ", " << MdCell(d.categories[1]) << ") | Ties | Consistency |\n";
  out << "|---|---|---|---|---|---|---|\n";
  for (const auto& ds : d.heatmap.datasets) {
    for (const auto& b : d.heatmap.bases) {
      const HeatCell* c = d.heatmap.Find(b, ds);
      if (c == nullptr) continue;
      out << "| " << MdCell(ds) << " | " << MdCell(b) << " | " << Fixed4(c->pcm.signed_mean)
          << " | " << Fixed4(c->pcm.abs_mean) << " | " << c->counts[0] << ", " << c->counts[1]
          << " | " << c->ties << " | " << MdCell(c->consistency.ToString()) << " |\n";
    }
  }
}

void RenderRq2(const Rq2Result& r, std::ostringstream& out) {
  out << "| Direction \\ Developers |";
  for (const auto& c : r.column_labels) out << " " << MdCell(c) << " |";
  out << "\n|---|";
  for (size_t i = 0; i < r.column_labels.size(); ++i) out << "---|";
  out << "\n";
  for (int i = 0; i < r.table.rows; ++i) {
    out << "| " << MdCell(r.row_labels[i]) << " |";
    for (int k = 0; k < r.table.cols; ++k) out << " " << r.table.at(i, k) << " |";
    out << "\n";
  }
  out << "\nchi-square = " << Fixed4(r.test.statistic);
  if (r.test.df) out << ", df = " << static_cast<long long>(*r.test.df);
  out << ", p = " << Fixed4(r.test.p_value) << ", n = " << r.test.n;
  if (r.test.degenerate) out << " (degenerate table)";
  out << "\n";
}

std::string RenderMarkdown(const AuditReport& report) {
  std::ostringstream out;
  out << "# Bias audit report\n\n";
  out << "- schema_version: " << report.schema_version << "\n";
  out << "- toolkit_version: " << report.provenance.toolkit_version << "\n";
  out << "- corpus: " << report.provenance.corpus_id;
  if (!report.provenance.corpus_digest.empty()) out << " (" << report.provenance.corpus_digest << ")";
  out << "\n- models: " << report.provenance.model_ids.size() << "\n";
  out << "- config: `" << internal::ConfigToJson(report.config).dump() << "`\n";
  for (const auto& d : report.dimensions) {
    out << "\n## " << MdCell(d.dimension) << "\n\n### Direction of bias\n\n";
    RenderDirectionTable(d, out);
    out << "\n### PCR and PCM over " << report.config.n_splits << " splits\n\n";
    RenderMetricTable(d, out);
    if (d.rq2) {
      out << "\n### Direction vs. developer demographics\n\n";
      RenderRq2(*d.rq2, out);
    }
  }
  return out.str();
}

}  // namespace

int PercentHalfUp(std::int64_t count, std::int64_t total) {
  if (total <= 0) throw ValidationError("percentage of an empty total");
  return static_cast<int>((200 * count + total) / (2 * total));
}

const DirectionCount* DimensionSummary::Find(std::string_view direction) const {
  for (const auto& r : rows) {
    if (r.direction == direction) return &r;
  }
  return nullptr;
}

std::vector<DimensionSummary> Summarize(std::span<const BiasVerdict> verdicts) {
  if (verdicts.empty()) throw ValidationError("cannot summarize an empty verdict list");
  std::vector<DimensionSummary> out;
  for (const auto& v : verdicts) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const DimensionSummary& s) { return s.dimension == v.dimension; });
    if (it == out.end()) {
      DimensionSummary s;
      s.dimension = v.dimension;
      s.rows = {{v.categories[0], 0, 0}, {v.categories[1], 0, 0},
                {std::string(kNoDirection), 0, 0}};
      out.push_back(std::move(s));
      it = out.end() - 1;
    }
    ++it->total;
    auto row = std::find_if(it->rows.begin(), it->rows.end(),
                            [&](const DirectionCount& r) { return r.direction == v.direction; });
    if (row == it->rows.end()) {
      throw ValidationError("verdict for '" + v.model_id + "' has direction '" + v.direction +
                            "' outside dimension '" + v.dimension + "'");
    }
    ++row->count;
  }
  for (auto& s : out) {
    for (auto& r : s.rows) r.percent = PercentHalfUp(r.count, s.total);
  }
  return out;
}

AuditReport BuildReport(std::span<const BiasVerdict> verdicts, std::span<const Rq2Result> rq2,
                        Provenance provenance) {
  if (verdicts.empty()) throw ValidationError("cannot build a report without verdicts");
  AuditReport report;
  report.config = verdicts.front().config;
  const auto summaries = Summarize(verdicts);
  auto matrices = RunRq3(verdicts);

  std::set<std::string> model_ids(provenance.model_ids.begin(), provenance.model_ids.end());
  for (const auto& v : verdicts) model_ids.insert(v.model_id);
  provenance.model_ids.assign(model_ids.begin(), model_ids.end());
  report.provenance = std::move(provenance);

  for (size_t i = 0; i < matrices.size(); ++i) {
    DimensionReport d;
    d.dimension = matrices[i].dimension;
    d.categories = matrices[i].categories;
    for (auto& c : matrices[i].cells) c.pcm = RoundPcm(c.pcm);
    d.heatmap = std::move(matrices[i]);
    d.summary = summaries[i];
    for (const auto& v : verdicts) {
      if (v.dimension == d.dimension) d.verdicts.push_back(MakeVerdictRow(v));
    }
    std::sort(d.verdicts.begin(), d.verdicts.end(), [](const VerdictRow& a, const VerdictRow& b) {
      if (a.model_base != b.model_base) return a.model_base < b.model_base;
      return NaturalLess(a.dataset_id, b.dataset_id);
    });
    for (const auto& r : rq2) {
      if (r.dimension != d.dimension) continue;
      Rq2Result copy = r;
      copy.test = RoundTest(r.test);
      d.rq2 = std::move(copy);
    }
    report.dimensions.push_back(std::move(d));
  }
  for (const auto& r : rq2) {
    if (std::none_of(report.dimensions.begin(), report.dimensions.end(),
                     [&](const DimensionReport& d) { return d.dimension == r.dimension; })) {
      throw ValidationError("rq2 result for unaudited dimension '" + r.dimension + "'");
    }
  }
  return report;
}

ReportFormat ParseReportFormat(std::string_view name) {
  for (auto f : {ReportFormat::kJson, ReportFormat::kCsv, ReportFormat::kMarkdown}) {
    if (ReportFormatName(f) == name) return f;
  }
  if (name == "md") return ReportFormat::kMarkdown;
  throw UsageError("unsupported report format '" + std::string(name) +
                   "' (expected json, csv, or markdown)");
}

std::string_view ReportFormatName(ReportFormat format) {
  switch (format) {
    case ReportFormat::kJson:
      return "json";
    case ReportFormat::kCsv:
      return "csv";
    case ReportFormat::kMarkdown:
      return "markdown";
  }
  return "json";
}

std::string Render(const AuditReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::kJson:
      return ToJson(report).dump(2) + "\n";
    case ReportFormat::kCsv:
      return RenderCsv(report);
    case ReportFormat::kMarkdown:
      return RenderMarkdown(report);
  }
  throw UsageError("unsupported report format");
}

AuditReport ParseReportJson(std::string_view json_text) {
  try {
    const Json j = Json::parse(json_text);
    AuditReport r;
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kReportSchemaVersion) {
      throw ValidationError("unsupported report schema_version " +
                            std::to_string(r.schema_version));
    }
    r.config = internal::ConfigFromJson(j.at("config"), AuditConfig{});
    const Json& prov = j.at("provenance");
    r.provenance.corpus_id = prov.at("corpus_id").get<std::string>();
    r.provenance.corpus_digest = prov.at("corpus_digest").get<std::string>();
    r.provenance.model_ids = prov.at("model_ids").get<std::vector<std::string>>();
    r.provenance.toolkit_version = prov.at("toolkit_version").get<std::string>();
    for (const auto& d : j.at("dimensions")) r.dimensions.push_back(DimensionFrom(d));
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed report: ") + e.what());
  }
}

std::string CompressIds(std::vector<std::string> ids) {
  std::sort(ids.begin(), ids.end(),
            [](const std::string& a, const std::string& b) { return NaturalLess(a, b); });
  // Split "D12" into ("D", 12); ids without a numeric suffix never join runs.
  auto split = [](const std::string& id) -> std::pair<std::string, long long> {
    size_t k = id.size();
    while (k > 0 && std::isdigit(static_cast<unsigned char>(id[k - 1]))) --k;
    if (k == id.size() || id.size() - k > 15) return {id, -1};
    return {id.substr(0, k), std::stoll(id.substr(k))};
  };
  std::string out;
  size_t i = 0;
  while (i < ids.size()) {
    const auto [prefix, num] = split(ids[i]);
    size_t j = i + 1;
    if (num >= 0) {
      while (j < ids.size()) {
        const auto [p2, n2] = split(ids[j]);
        if (p2 != prefix || n2 != num + static_cast<long long>(j - i)) break;
        ++j;
      }
    }
    if (!out.empty()) out += ", ";
    if (j - i >= 3) {
      out += ids[i] + "-" + ids[j - 1];
      i = j;
    } else {
      out += ids[i];
      ++i;
    }
  }
  return out;
}

}  // namespace bab
