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

#include "bab/corpus.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>
#include <unordered_map>

#include "bab/errors.h"
#include "bab/rng.h"

namespace bab {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::string_view kTsvHeader = "id\tpair_id\tdimension\tcategory\texpression\ttext";

struct Record {
  EvaluationSentence sentence;
  int line = 0;
};

std::string LinePrefix(int line) { return "line " + std::to_string(line) + ": "; }

Expression ParseExpression(std::string_view s, int line) {
  if (s == "explicit") return Expression::kExplicit;
  if (s == "implicit") return Expression::kImplicit;
  throw ValidationError(LinePrefix(line) + "expression must be 'explicit' or "
                        "'implicit', got '" + std::string(s) + "'");
}

std::string RequireString(const json& obj, const char* key, int line) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ValidationError(LinePrefix(line) + "malformed record: missing '" + key + "'");
  }
  if (!it->is_string()) {
    throw ValidationError(LinePrefix(line) + "malformed record: '" + key +
                          "' must be a string");
  }
  return it->get<std::string>();
}

Record ParseJsonRecord(std::string_view text, int line) {
  json obj;
  try {
    obj = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(LinePrefix(line) + "malformed record: " + e.what());
  }
  if (!obj.is_object()) {
    throw ValidationError(LinePrefix(line) + "malformed record: not a JSON object");
  }
  Record r;
  r.line = line;
  r.sentence.id = RequireString(obj, "id", line);
  r.sentence.dimension = RequireString(obj, "dimension", line);
  r.sentence.category = RequireString(obj, "category", line);
  r.sentence.expression = ParseExpression(RequireString(obj, "expression", line), line);
  r.sentence.text = RequireString(obj, "text", line);
  if (auto it = obj.find("pair_id"); it != obj.end() && !it->is_null()) {
    if (!it->is_string()) {
      throw ValidationError(LinePrefix(line) +
                            "malformed record: 'pair_id' must be a string or null");
    }
    r.sentence.pair_id = it->get<std::string>();
  }
  return r;
}

std::string TsvUnescape(std::string_view field, int line) {
  std::string out;
  out.reserve(field.size());
  for (size_t i = 0; i < field.size(); ++i) {
    if (field[i] != '\\') {
      out.push_back(field[i]);
      continue;
    }
    if (++i == field.size()) {
      throw ValidationError(LinePrefix(line) + "malformed record: dangling escape");
    }
    switch (field[i]) {
      case 't': out.push_back('\t'); break;
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      case '\\': out.push_back('\\'); break;
      default:
        throw ValidationError(LinePrefix(line) + "malformed record: unknown escape '\\" +
                              std::string(1, field[i]) + "'");
    }
  }
  return out;
}

std::string TsvEscape(std::string_view field) {
  std::string out;
  out.reserve(field.size());
  for (char c : field) {
    switch (c) {
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\\': out += "\\\\"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

Record ParseTsvRecord(std::string_view text, int line) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  for (;;) {
    const size_t tab = text.find('\t', start);
    fields.push_back(text.substr(start, tab == std::string_view::npos ? tab : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  if (fields.size() != 6) {
    throw ValidationError(LinePrefix(line) + "malformed record: expected 6 columns, got " +
                          std::to_string(fields.size()));
  }
  for (int i : {0, 2, 3, 4, 5}) {
    if (fields[i] == "\\N") {
      throw ValidationError(LinePrefix(line) + "malformed record: column " +
                            std::to_string(i + 1) + " may not be null");
    }
  }
  Record r;
  r.line = line;
  r.sentence.id = TsvUnescape(fields[0], line);
  if (fields[1] != "\\N") r.sentence.pair_id = TsvUnescape(fields[1], line);
  r.sentence.dimension = TsvUnescape(fields[2], line);
  r.sentence.category = TsvUnescape(fields[3], line);
  r.sentence.expression = ParseExpression(TsvUnescape(fields[4], line), line);
  r.sentence.text = TsvUnescape(fields[5], line);
  return r;
}

Corpus Assemble(std::vector<Record> records, std::string provenance,
                const DimensionRegistry& registry) {
  std::unordered_map<std::string, int> seen_ids;
  for (const Record& r : records) {
    const EvaluationSentence& s = r.sentence;
    if (s.id.empty()) throw ValidationError(LinePrefix(r.line) + "empty id");
    if (auto [it, inserted] = seen_ids.emplace(s.id, r.line); !inserted) {
      throw ValidationError(LinePrefix(r.line) + "duplicate id '" + s.id +
                            "' (first seen on line " + std::to_string(it->second) + ")");
    }
    const IdentityDimension* dim = registry.Find(s.dimension);
    if (dim == nullptr) {
      throw ValidationError(LinePrefix(r.line) + "unknown dimension '" + s.dimension + "'");
    }
    if (dim->IndexOf(s.category) < 0) {
      throw ValidationError(LinePrefix(r.line) + "unknown category '" + s.category +
                            "' for dimension '" + s.dimension + "'");
    }
    if (s.pair_id.has_value() && s.pair_id->empty()) {
      throw ValidationError(LinePrefix(r.line) + "empty pair_id");
    }
  }

  Corpus corpus;
  corpus.provenance = std::move(provenance);

  std::vector<std::string> pair_order;
  std::unordered_map<std::string, std::vector<const Record*>> groups;
  for (const Record& r : records) {
    if (!r.sentence.pair_id.has_value()) {
      corpus.unpaired.push_back(r.sentence);
      continue;
    }
    auto& group = groups[*r.sentence.pair_id];
    if (group.empty()) pair_order.push_back(*r.sentence.pair_id);
    group.push_back(&r);
  }

  for (const std::string& pid : pair_order) {
    const auto& group = groups[pid];
    if (group.size() == 1) {
      throw ValidationError(LinePrefix(group[0]->line) + "dangling pair '" + pid +
                            "': only one sentence carries this pair_id");
    }
    if (group.size() > 2) {
      throw ValidationError(LinePrefix(group[2]->line) + "pair '" + pid + "' has " +
                            std::to_string(group.size()) + " sentences, expected 2");
    }
    const EvaluationSentence& a = group[0]->sentence;
    const EvaluationSentence& b = group[1]->sentence;
    const int line = group[1]->line;
    if (a.dimension != b.dimension) {
      throw ValidationError(LinePrefix(line) + "pair '" + pid + "' mixes dimensions");
    }
    if (a.expression != b.expression) {
      throw ValidationError(LinePrefix(line) + "pair '" + pid + "' mixes expressions");
    }
    if (a.category == b.category) {
      throw ValidationError(LinePrefix(line) + "pair '" + pid +
                            "' has the same category on both sides");
    }
    if (a.text == b.text) {
      throw ValidationError(LinePrefix(line) + "pair '" + pid + "' has identical texts");
    }
    const IdentityDimension* dim = registry.Find(a.dimension);
    const bool a_first = dim->IndexOf(a.category) == 0;
    EvaluationPair pair;
    pair.pair_id = pid;
    pair.dimension = a.dimension;
    pair.expression = a.expression;
    pair.left = a_first ? a : b;
    pair.right = a_first ? b : a;
    corpus.pairs.push_back(std::move(pair));
  }

  for (const IdentityDimension& dim : registry.dimensions()) {
    size_t per_category[2] = {0, 0};
    bool present = false;
    for (const auto& p : corpus.pairs) present |= p.dimension == dim.name;
    for (const auto& s : corpus.unpaired) {
      if (s.dimension != dim.name) continue;
      present = true;
      ++per_category[dim.IndexOf(s.category)];
    }
    if ((per_category[0] == 0) != (per_category[1] == 0)) {
      throw ValidationError("dimension '" + dim.name +
                            "' has unpaired sentences for only one category");
    }
    if (present) corpus.dimensions.push_back(dim);
  }
  return corpus;
}

std::vector<std::string_view> SplitLines(std::string_view content) {
  std::vector<std::string_view> lines;
  size_t start = 0;
  while (start <= content.size()) {
    size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (end == content.size()) break;
    start = end + 1;
  }
  return lines;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

int IdentityDimension::IndexOf(std::string_view category) const {
  if (categories[0] == category) return 0;
  if (categories[1] == category) return 1;
  return -1;
}

DimensionRegistry DimensionRegistry::Default() {
  DimensionRegistry r;
  r.Add({"gender", {"female", "male"}});
  r.Add({"religion", {"Hindu", "Muslim"}});
  r.Add({"nationality", {"Bangladeshi", "Indian"}});
  return r;
}

void DimensionRegistry::Add(IdentityDimension dimension) {
  if (dimension.name.empty()) throw ValidationError("dimension name is empty");
  if (Find(dimension.name) != nullptr) {
    throw ValidationError("dimension '" + dimension.name + "' already registered");
  }
  if (dimension.categories[0] == dimension.categories[1]) {
    throw ValidationError("dimension '" + dimension.name + "' repeats a category");
  }
  for (const auto& c : dimension.categories) {
    if (c.empty() || c == "tie" || c == "none") {
      throw ValidationError("dimension '" + dimension.name +
                            "' uses a reserved or empty category name '" + c + "'");
    }
  }
  dims_.push_back(std::move(dimension));
}

const IdentityDimension* DimensionRegistry::Find(std::string_view name) const {
  for (const auto& d : dims_) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

std::string_view ExpressionName(Expression e) {
  return e == Expression::kExplicit ? "explicit" : "implicit";
}

const IdentityDimension& Corpus::Dimension(std::string_view name) const {
  for (const auto& d : dimensions) {
    if (d.name == name) return d;
  }
  throw ValidationError("corpus has no dimension '" + std::string(name) + "'");
}

std::vector<const EvaluationPair*> Corpus::PairsFor(std::string_view dimension) const {
  std::vector<const EvaluationPair*> out;
  for (const auto& p : pairs) {
    if (p.dimension == dimension) out.push_back(&p);
  }
  return out;
}

std::vector<const EvaluationSentence*> Corpus::UnpairedFor(
    std::string_view dimension, std::string_view category) const {
  std::vector<const EvaluationSentence*> out;
  for (const auto& s : unpaired) {
    if (s.dimension == dimension && s.category == category) out.push_back(&s);
  }
  return out;
}

std::vector<const EvaluationSentence*> Corpus::SentencesFor(
    std::string_view dimension) const {
  std::vector<const EvaluationSentence*> out;
  for (const auto& p : pairs) {
    if (p.dimension != dimension) continue;
    out.push_back(&p.left);
    out.push_back(&p.right);
  }
  for (const auto& s : unpaired) {
    if (s.dimension == dimension) out.push_back(&s);
  }
  return out;
}

CorpusFormat ParseCorpusFormat(std::string_view name) {
  if (name == "jsonl") return CorpusFormat::kJsonl;
  if (name == "tsv") return CorpusFormat::kTsv;
  throw UsageError("unknown corpus format '" + std::string(name) +
                   "' (expected jsonl or tsv)");
}

Corpus ParseCorpus(std::string_view content, CorpusFormat format,
                   const DimensionRegistry& registry) {
  std::vector<Record> records;
  std::string provenance;
  bool first_data_line = true;
  int line_no = 0;
  for (std::string_view line : SplitLines(content)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::string_view note = line.substr(1);
      if (!note.empty() && note.front() == ' ') note.remove_prefix(1);
      provenance.append(note).push_back('\n');
      continue;
    }
    if (format == CorpusFormat::kTsv && first_data_line && line == kTsvHeader) {
      first_data_line = false;
      continue;
    }
    first_data_line = false;
    records.push_back(format == CorpusFormat::kJsonl ? ParseJsonRecord(line, line_no)
                                                     : ParseTsvRecord(line, line_no));
  }
  if (!provenance.empty()) provenance.pop_back();
  return Assemble(std::move(records), std::move(provenance), registry);
}

Corpus LoadCorpus(const std::filesystem::path& path, CorpusFormat format,
                  const DimensionRegistry& registry) {
  return ParseCorpus(ReadFile(path), format, registry);
}

std::string SerializeCorpus(const Corpus& corpus, CorpusFormat format) {
  std::string out;
  if (!corpus.provenance.empty()) {
    for (std::string_view line : SplitLines(corpus.provenance)) {
      out.append("# ").append(line).push_back('\n');
    }
  }
  auto emit = [&](const EvaluationSentence& s) {
    if (format == CorpusFormat::kJsonl) {
      ordered_json j;
      j["id"] = s.id;
      j["pair_id"] = s.pair_id.has_value() ? ordered_json(*s.pair_id) : ordered_json(nullptr);
      j["dimension"] = s.dimension;
      j["category"] = s.category;
      j["expression"] = ExpressionName(s.expression);
      j["text"] = s.text;
      out.append(j.dump());
    } else {
      out.append(TsvEscape(s.id)).push_back('\t');
      out.append(s.pair_id.has_value() ? TsvEscape(*s.pair_id) : "\\N").push_back('\t');
      out.append(TsvEscape(s.dimension)).push_back('\t');
      out.append(TsvEscape(s.category)).push_back('\t');
      out.append(ExpressionName(s.expression)).push_back('\t');
      out.append(TsvEscape(s.text));
    }
    out.push_back('\n');
  };
  for (const auto& p : corpus.pairs) {
    emit(p.left);
    emit(p.right);
  }
  for (const auto& s : corpus.unpaired) emit(s);
  return out;
}

void SaveCorpus(const Corpus& corpus, const std::filesystem::path& path,
                CorpusFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write '" + path.string() + "'");
  out << SerializeCorpus(corpus, format);
}

std::size_t FloorFraction(double fraction, std::size_t n) {
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
}

UnpairedSample SampleUnpaired(const Corpus& corpus, std::string_view dimension,
                              double fraction, std::uint64_t seed,
                              std::int64_t repetition) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw ValidationError("sample fraction must lie in (0, 1]");
  }
  const IdentityDimension& dim = corpus.Dimension(dimension);
  const auto first = corpus.UnpairedFor(dimension, dim.categories[0]);
  const auto second = corpus.UnpairedFor(dimension, dim.categories[1]);
  if (first.empty() || second.empty()) {
    throw ValidationError("dimension '" + std::string(dimension) +
                          "' has an empty unpaired category");
  }
  const std::size_t size = FloorFraction(fraction, std::min(first.size(), second.size()));
  if (size == 0) {
    throw ValidationError("sample fraction yields an empty sample for dimension '" +
                          std::string(dimension) + "'");
  }
  UnpairedSample sample;
  // Keyed by category name, not position, so reordering a dimension's
  // categories leaves each category's sample unchanged.
  auto draw = [&](const std::vector<const EvaluationSentence*>& pool, int category,
                  std::vector<EvaluationSentence>* out) {
    rng::Stream stream(rng::DeriveSeed(
        seed, {rng::HashString("unpaired"), rng::HashString(dimension),
               static_cast<std::uint64_t>(repetition),
               rng::HashString(dim.categories[category])}));
    for (std::size_t i : rng::SampleIndices(pool.size(), size, stream)) {
      out->push_back(*pool[i]);
    }
  };
  draw(first, 0, &sample.first);
  draw(second, 1, &sample.second);
  return sample;
}

std::vector<Split> MakeSplits(const Corpus& corpus, std::string_view dimension,
                              const SplitPlan& plan) {
  if (plan.n_splits < 1) throw ValidationError("split plan needs n_splits >= 1");
  const auto pairs = corpus.PairsFor(dimension);
  if (pairs.empty()) {
    throw ValidationError("dimension '" + std::string(dimension) + "' has no pairs");
  }
  const std::size_t count = pairs.size();
  std::vector<Split> splits(plan.n_splits);

  if (plan.disjoint) {
    rng::Stream stream(rng::DeriveSeed(
        plan.seed, {rng::HashString("folds"), rng::HashString(dimension)}));
    const auto order = rng::Permutation(count, stream);
    std::vector<std::vector<std::size_t>> folds(plan.n_splits);
    for (std::size_t i = 0; i < count; ++i) folds[i % plan.n_splits].push_back(order[i]);
    for (int k = 0; k < plan.n_splits; ++k) {
      if (folds[k].size() < 2) {
        throw ValidationError("disjoint folds of " + std::to_string(count) +
                              " pairs into " + std::to_string(plan.n_splits) +
                              " splits leave fewer than 2 pairs per split");
      }
      std::sort(folds[k].begin(), folds[k].end());
      splits[k].index = k;
      for (std::size_t i : folds[k]) splits[k].pair_ids.push_back(pairs[i]->pair_id);
    }
    return splits;
  }

  if (!(plan.fraction > 0.0 && plan.fraction <= 1.0)) {
    throw ValidationError("split fraction must lie in (0, 1]");
  }
  const auto size =
      static_cast<std::size_t>(std::llround(plan.fraction * static_cast<double>(count)));
  if (size < 2) {
    throw ValidationError("split fraction " + std::to_string(plan.fraction) + " of " +
                          std::to_string(count) + " pairs leaves fewer than 2 pairs per split");
  }
  for (int k = 0; k < plan.n_splits; ++k) {
    rng::Stream stream(rng::DeriveSeed(
        plan.seed, {rng::HashString("split"), rng::HashString(dimension),
                    static_cast<std::uint64_t>(k)}));
    splits[k].index = k;
    for (std::size_t i : rng::SampleIndices(count, size, stream)) {
      splits[k].pair_ids.push_back(pairs[i]->pair_id);
    }
  }
  return splits;
}

}  // namespace bab
