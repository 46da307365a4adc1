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

#include "bab/audit.h"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <exception>
#include <fstream>
#include <mutex>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "bab/errors.h"

namespace bab {
namespace {

using nlohmann::json;

bool Qualifies(const TestResult& r, const AuditConfig& config) {
  return !r.degenerate && r.p_value < config.alpha && r.power >= config.power_threshold;
}

ContingencyTable CategoryByLabel(std::span<const Observation> obs) {
  ContingencyTable table(2, 2);
  for (const Observation& o : obs) {
    ++table.at(0, o.first.positive() ? 1 : 0);
    ++table.at(1, o.second.positive() ? 1 : 0);
  }
  return table;
}

SplitEvidence EvaluateSplit(int index, std::span<const Observation> obs,
                            const IdentityDimension& dim, const AuditConfig& config) {
  SplitEvidence ev;
  ev.index = index;
  ev.n_observations = static_cast<std::int64_t>(obs.size());

  std::vector<double> first(obs.size()), second(obs.size()), diffs(obs.size());
  std::vector<std::pair<double, double>> score_pairs(obs.size());
  ScoredGroup group_a{dim.categories[0], {}}, group_b{dim.categories[1], {}};
  for (size_t i = 0; i < obs.size(); ++i) {
    first[i] = obs[i].first.score;
    second[i] = obs[i].second.score;
    diffs[i] = first[i] - second[i];
    score_pairs[i] = {first[i], second[i]};
    group_a.outputs.push_back(obs[i].first);
    group_b.outputs.push_back(obs[i].second);
  }

  ev.nominal = ChiSquareIndependence(CategoryByLabel(obs), {.alpha = config.alpha});
  ev.nominal_significant = Qualifies(ev.nominal, config);

  TestKind kind = TestKind::kWilcoxonSignedRank;
  const auto [lo, hi] = std::minmax_element(diffs.begin(), diffs.end());
  if (obs.empty() || *lo == *hi) {
    if (obs.empty() || *lo == 0.0) throw StatsError("all score differences are zero");
  } else if (obs.size() >= 3 && obs.size() <= 5000) {
    ev.normality = ShapiroWilk(diffs);
    if (ev.normality->p_value >= config.alpha) kind = TestKind::kPairedT;
  }
  auto run = [&](Tail tail) {
    return kind == TestKind::kPairedT
               ? PairedT(first, second, tail, config.alpha)
               : WilcoxonSignedRank(first, second, tail, config.alpha);
  };

  ev.two_sided = run(Tail::kTwoSided);
  if (Qualifies(ev.two_sided, config)) {
    const TestResult right = run(Tail::kRight);
    const TestResult left = run(Tail::kLeft);
    if (Qualifies(right, config)) {
      ev.direction = dim.categories[0];
      ev.directional = right;
    } else if (Qualifies(left, config)) {
      ev.direction = dim.categories[1];
      ev.directional = left;
    } else {
      ev.directional = right.p_value <= left.p_value ? right : left;
    }
  }

  ev.pcr = Pcr(group_a, group_b);
  ev.pcm = PcmAll(score_pairs);
  return ev;
}

std::string MissingScoresMessage(const std::string& model_id, std::string_view dimension,
                                 const std::vector<std::string>& missing) {
  std::string msg = "model '" + model_id + "' lacks scores for " +
                    std::to_string(missing.size()) + " sentence(s) of dimension '" +
                    std::string(dimension) + "': ";
  for (size_t i = 0; i < missing.size() && i < 5; ++i) {
    if (i > 0) msg += ", ";
    msg += missing[i];
  }
  if (missing.size() > 5) msg += ", ...";
  return msg;
}

}  // namespace

void AuditConfig::Validate() const {
  auto fail = [](const std::string& what) { throw UsageError("audit config: " + what); };
  if (!(alpha > 0.0 && alpha < 1.0)) fail("alpha must lie in (0, 1)");
  if (!(power_threshold > 0.0 && power_threshold <= 1.0)) {
    fail("power_threshold must lie in (0, 1]");
  }
  if (n_splits < 1) fail("n_splits must be >= 1");
  if (!(split_fraction > 0.0 && split_fraction <= 1.0)) {
    fail("split_fraction must lie in (0, 1]");
  }
  if (consolidation_repetitions < 1) fail("consolidation_repetitions must be >= 1");
  if (consistency_quorum < 1 || consistency_quorum > n_splits) {
    fail("consistency_quorum must lie in [1, n_splits]");
  }
}

ModelRef ModelRef::Parse(std::string_view model_id) {
  ModelRef ref;
  ref.model_id = std::string(model_id);
  const auto dash = model_id.find('-');
  if (dash == std::string_view::npos || dash == 0 || dash + 1 == model_id.size()) {
    ref.dataset = ref.model_id;
    ref.base = "default";
  } else {
    ref.dataset = std::string(model_id.substr(0, dash));
    ref.base = std::string(model_id.substr(dash + 1));
  }
  return ref;
}

SentimentOutput Consolidate(std::span<const SentimentOutput> outputs) {
  if (outputs.empty()) throw ValidationError("cannot consolidate an empty sample");
  std::int64_t positives = 0;
  double sum = 0.0;
  for (const auto& o : outputs) {
    positives += o.positive() ? 1 : 0;
    sum += o.score;
  }
  const auto n = static_cast<std::int64_t>(outputs.size());
  SentimentOutput out;
  out.score = sum / static_cast<double>(n);
  if (2 * positives > n) {
    out.label = Label::kPositive;
  } else if (2 * positives < n) {
    out.label = Label::kNegative;
  } else {
    out.label = SentimentOutput::FromScore(out.score).label;
  }
  return out;
}

int BiasVerdict::DirectionalCount(std::string_view category) const {
  int count = 0;
  for (const auto& ev : split_evidence) count += ev.direction == category ? 1 : 0;
  return count;
}

std::vector<std::vector<Observation>> BuildObservations(const ModelScores& scores,
                                                        const Corpus& corpus,
                                                        std::string_view dimension,
                                                        const AuditConfig& config) {
  const IdentityDimension& dim = corpus.Dimension(dimension);
  std::vector<std::string> missing;
  for (const EvaluationSentence* s : corpus.SentencesFor(dimension)) {
    if (scores.Find(s->id) == nullptr) missing.push_back(s->id);
  }
  if (!missing.empty()) {
    throw ValidationError(MissingScoresMessage(scores.model_id, dimension, missing));
  }

  std::vector<std::vector<Observation>> splits(config.n_splits);
  const auto pairs = corpus.PairsFor(dimension);
  if (!pairs.empty()) {
    std::unordered_map<std::string, const EvaluationPair*> by_id;
    for (const EvaluationPair* p : pairs) by_id.emplace(p->pair_id, p);
    const SplitPlan plan{.seed = config.seed,
                         .n_splits = config.n_splits,
                         .fraction = config.split_fraction,
                         .disjoint = config.disjoint_splits};
    for (const Split& split : MakeSplits(corpus, dimension, plan)) {
      auto& obs = splits[split.index];
      for (const std::string& pid : split.pair_ids) {
        const EvaluationPair* p = by_id.at(pid);
        obs.push_back({*scores.Find(p->left.id), *scores.Find(p->right.id)});
      }
    }
  }

  if (!corpus.UnpairedFor(dimension, dim.categories[0]).empty()) {
    const int reps = config.consolidation_repetitions;
    for (int k = 0; k < config.n_splits; ++k) {
      for (int r = 0; r < reps; ++r) {
        const UnpairedSample sample =
            SampleUnpaired(corpus, dimension, config.split_fraction, config.seed,
                           static_cast<std::int64_t>(k) * reps + r);
        std::vector<SentimentOutput> a, b;
        for (const auto& s : sample.first) a.push_back(*scores.Find(s.id));
        for (const auto& s : sample.second) b.push_back(*scores.Find(s.id));
        splits[k].push_back({Consolidate(a), Consolidate(b)});
      }
    }
  }
  return splits;
}

BiasVerdict RunRq1(const ModelScores& scores, const Corpus& corpus,
                   std::string_view dimension, const AuditConfig& config) {
  config.Validate();
  const IdentityDimension& dim = corpus.Dimension(dimension);
  const ModelRef ref = ModelRef::Parse(scores.model_id);

  BiasVerdict v;
  v.model_id = ref.model_id;
  v.model_base = ref.base;
  v.dataset_id = ref.dataset;
  v.dimension = dim.name;
  v.categories = dim.categories;
  v.config = config;

  const auto observations = BuildObservations(scores, corpus, dimension, config);
  for (int k = 0; k < config.n_splits; ++k) {
    try {
      v.split_evidence.push_back(EvaluateSplit(k, observations[k], dim, config));
    } catch (const StatsError& e) {
      throw ValidationError("model '" + v.model_id + "', dimension '" + v.dimension +
                            "', split " + std::to_string(k) + ": " + e.what());
    }
  }

  PcmSet total;
  for (const SplitEvidence& ev : v.split_evidence) {
    v.nominal_significant_splits += ev.nominal_significant ? 1 : 0;
    v.pcr_directions.push_back(ev.pcr.direction);
    total.signed_mean += ev.pcm.signed_mean;
    total.abs_mean += ev.pcm.abs_mean;
    total.signed_sum += ev.pcm.signed_sum;
    total.n_pairs += ev.pcm.n_pairs;
  }
  const double n = static_cast<double>(config.n_splits);
  v.pcm_mean = {total.signed_mean / n, total.abs_mean / n, total.signed_sum / n,
                total.n_pairs};
  v.nominal_related = v.nominal_significant_splits >= config.consistency_quorum;

  if (config.chi_square_full_corpus) {
    ContingencyTable table(2, 2);
    for (const EvaluationSentence* s : corpus.SentencesFor(dimension)) {
      ++table.at(dim.IndexOf(s->category), scores.Find(s->id)->positive() ? 1 : 0);
    }
    v.nominal_full = ChiSquareIndependence(table, {.alpha = config.alpha});
    v.nominal_related = Qualifies(*v.nominal_full, config);
  }

  const int a = v.DirectionalCount(dim.categories[0]);
  const int b = v.DirectionalCount(dim.categories[1]);
  if (a >= config.consistency_quorum && a > b) {
    v.direction = dim.categories[0];
  } else if (b >= config.consistency_quorum && b > a) {
    v.direction = dim.categories[1];
  }
  return v;
}

std::vector<BiasVerdict> RunAudit(std::span<const ModelScores> models,
                                  const Corpus& corpus, const AuditConfig& config) {
  config.Validate();
  std::vector<const ModelScores*> ordered;
  for (const auto& m : models) ordered.push_back(&m);
  std::sort(ordered.begin(), ordered.end(), [](const ModelScores* x, const ModelScores* y) {
    return x->model_id < y->model_id;
  });
  for (size_t i = 1; i < ordered.size(); ++i) {
    if (ordered[i]->model_id == ordered[i - 1]->model_id) {
      throw ValidationError("model '" + ordered[i]->model_id + "' supplied twice");
    }
  }

  struct Cell {
    const ModelScores* model;
    std::string dimension;
  };
  std::vector<Cell> cells;
  for (const auto& dim : corpus.dimensions) {
    for (const ModelScores* m : ordered) cells.push_back({m, dim.name});
  }

  std::vector<BiasVerdict> verdicts(cells.size());
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      try {
        verdicts[i] = RunRq1(*cells[i].model, corpus, cells[i].dimension, config);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
        next = cells.size();
        return;
      }
    }
  };
  const size_t n_threads =
      std::max<size_t>(1, std::min<size_t>(std::thread::hardware_concurrency(), cells.size()));
  std::vector<std::thread> threads;
  for (size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
  return verdicts;
}

bool DeveloperProfile::available() const {
  for (const auto& [dim, cats] : categories) {
    if (!cats.empty()) return true;
  }
  return false;
}

std::string DeveloperProfile::GroupLabel(std::string_view dimension) const {
  auto it = categories.find(std::string(dimension));
  if (it == categories.end()) return {};
  std::string label;
  for (const auto& c : it->second) {
    if (!label.empty()) label += "+";
    label += c;
  }
  return label;
}

std::vector<DeveloperProfile> ParseProfiles(std::string_view content) {
  std::vector<DeveloperProfile> profiles;
  std::istringstream in{std::string(content)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const std::string where = "profile line " + std::to_string(line_no) + ": ";
    try {
      const json j = json::parse(line);
      DeveloperProfile p;
      p.dataset_id = j.at("dataset_id").get<std::string>();
      for (const auto& [key, value] : j.items()) {
        if (key == "dataset_id") continue;
        if (value.is_null()) {
          p.categories[key] = {};
          continue;
        }
        p.categories[key] = value.get<std::vector<std::string>>();
      }
      for (const auto& other : profiles) {
        if (other.dataset_id == p.dataset_id) {
          throw ValidationError("duplicate dataset_id '" + p.dataset_id + "'");
        }
      }
      profiles.push_back(std::move(p));
    } catch (const json::exception& e) {
      throw ValidationError(where + "malformed record: " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    }
  }
  return profiles;
}

std::vector<DeveloperProfile> LoadProfiles(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseProfiles(buffer.str());
}

Rq2Result RunRq2(std::span<const BiasVerdict> verdicts,
                 std::span<const DeveloperProfile> profiles,
                 const IdentityDimension& dimension, double alpha) {
  Rq2Result result;
  result.dimension = dimension.name;
  result.row_labels = {"toward " + dimension.categories[0],
                       "toward " + dimension.categories[1], "no/rare"};

  std::vector<const BiasVerdict*> relevant;
  for (const auto& v : verdicts) {
    if (v.dimension == dimension.name) relevant.push_back(&v);
  }
  std::sort(relevant.begin(), relevant.end(), [](const BiasVerdict* a, const BiasVerdict* b) {
    return a->model_id < b->model_id;
  });

  // Columns in profile-file order, restricted to groups that have models.
  std::vector<std::pair<const BiasVerdict*, std::string>> entries;
  for (const BiasVerdict* v : relevant) {
    for (const auto& p : profiles) {
      if (p.dataset_id != v->dataset_id) continue;
      const std::string group = p.GroupLabel(dimension.name);
      if (!group.empty()) entries.emplace_back(v, group);
      break;
    }
  }
  if (entries.empty()) {
    throw ValidationError("no audited models of dimension '" + dimension.name +
                          "' have developer profiles");
  }
  for (const auto& p : profiles) {
    const std::string group = p.GroupLabel(dimension.name);
    if (group.empty()) continue;
    if (std::find(result.column_labels.begin(), result.column_labels.end(), group) !=
        result.column_labels.end()) {
      continue;
    }
    for (const auto& [v, g] : entries) {
      if (g == group) {
        result.column_labels.push_back(group);
        break;
      }
    }
  }

  result.table = ContingencyTable(3, static_cast<int>(result.column_labels.size()));
  for (const auto& [v, group] : entries) {
    int row = 2;
    if (v->direction == dimension.categories[0]) row = 0;
    if (v->direction == dimension.categories[1]) row = 1;
    const auto col = std::find(result.column_labels.begin(), result.column_labels.end(), group) -
                     result.column_labels.begin();
    ++result.table.at(row, static_cast<int>(col));
    result.models.push_back(v->model_id);
  }
  result.test = ChiSquareIndependence(result.table, {.alpha = alpha});
  return result;
}

const HeatCell* ComparisonMatrix::Find(std::string_view base, std::string_view dataset) const {
  for (const auto& c : cells) {
    if (c.model_base == base && c.dataset_id == dataset) return &c;
  }
  return nullptr;
}

std::vector<ComparisonMatrix> RunRq3(std::span<const BiasVerdict> verdicts) {
  if (verdicts.empty()) return {};
  for (const auto& v : verdicts) {
    if (!(v.config == verdicts.front().config)) {
      throw ValidationError("verdict for model '" + v.model_id + "', dimension '" +
                            v.dimension + "' was computed with a different configuration");
    }
  }
  std::vector<ComparisonMatrix> matrices;
  for (const auto& v : verdicts) {
    auto it = std::find_if(matrices.begin(), matrices.end(),
                           [&](const ComparisonMatrix& m) { return m.dimension == v.dimension; });
    if (it == matrices.end()) {
      matrices.push_back({v.dimension, v.categories, {}, {}, {}});
      it = matrices.end() - 1;
    }
    ComparisonMatrix& m = *it;
    if (m.Find(v.model_base, v.dataset_id) != nullptr) {
      throw ValidationError("two verdicts for base '" + v.model_base + "', dataset '" +
                            v.dataset_id + "' in dimension '" + v.dimension + "'");
    }
    HeatCell cell;
    cell.model_base = v.model_base;
    cell.dataset_id = v.dataset_id;
    for (const auto& d : v.pcr_directions) {
      if (d == v.categories[0]) {
        ++cell.counts[0];
      } else if (d == v.categories[1]) {
        ++cell.counts[1];
      } else {
        ++cell.ties;
      }
    }
    cell.consistency = ConstantBias(v.pcr_directions);
    cell.pcm = v.pcm_mean;
    cell.verdict_direction = v.direction;
    m.cells.push_back(std::move(cell));
    if (std::find(m.bases.begin(), m.bases.end(), v.model_base) == m.bases.end()) {
      m.bases.push_back(v.model_base);
    }
    if (std::find(m.datasets.begin(), m.datasets.end(), v.dataset_id) == m.datasets.end()) {
      m.datasets.push_back(v.dataset_id);
    }
  }
  for (auto& m : matrices) {
    std::sort(m.bases.begin(), m.bases.end());
    std::sort(m.datasets.begin(), m.datasets.end(),
              [](const std::string& a, const std::string& b) { return NaturalLess(a, b); });
    std::vector<HeatCell> ordered;
    for (const auto& d : m.datasets) {
      for (const auto& b : m.bases) {
        if (const HeatCell* c = m.Find(b, d)) ordered.push_back(*c);
      }
    }
    m.cells = std::move(ordered);
  }
  return matrices;
}

Preference CompareCells(const HeatCell& a, const HeatCell& b) {
  const int ca = std::max(a.counts[0], a.counts[1]);
  const int cb = std::max(b.counts[0], b.counts[1]);
  if (ca != cb) return ca < cb ? Preference::kFirst : Preference::kSecond;
  if (a.pcm.abs_mean != b.pcm.abs_mean) {
    return a.pcm.abs_mean < b.pcm.abs_mean ? Preference::kFirst : Preference::kSecond;
  }
  return Preference::kEquivalent;
}

bool NaturalLess(std::string_view a, std::string_view b) {
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const bool da = std::isdigit(static_cast<unsigned char>(a[i]));
    const bool db = std::isdigit(static_cast<unsigned char>(b[j]));
    if (da && db) {
      size_t ie = i, je = j;
      while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie]))) ++ie;
      while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je]))) ++je;
      std::string_view na = a.substr(i, ie - i), nb = b.substr(j, je - j);
      while (na.size() > 1 && na.front() == '0') na.remove_prefix(1);
      while (nb.size() > 1 && nb.front() == '0') nb.remove_prefix(1);
      if (na.size() != nb.size()) return na.size() < nb.size();
      if (na != nb) return na < nb;
      i = ie;
      j = je;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  if ((a.size() - i) != (b.size() - j)) return a.size() - i < b.size() - j;
  return a < b;
}

}  // namespace bab
