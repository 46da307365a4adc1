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

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>
#include <sstream>

#include "bab/errors.h"
#include "bab/rng.h"
#include "test_util.h"

namespace bab {
namespace {

using nlohmann::json;

// Verdicts whose directions follow the reference per-dataset table.
std::vector<BiasVerdict> DirectionVerdicts(const std::string& dimension) {
  const json doc =
      json::parse(testing::ReadData("audit_directions.json"))["dimensions"][dimension];
  const auto categories = doc["categories"].get<std::array<std::string, 2>>();
  std::vector<BiasVerdict> out;
  for (const char* base : {"mBERT", "BanglaBERT"}) {
    for (const auto& [direction, ids] : doc[base].items()) {
      for (const auto& id : ids) {
        BiasVerdict v;
        v.dataset_id = id.get<std::string>();
        v.model_base = base;
        v.model_id = v.dataset_id + "-" + base;
        v.dimension = dimension;
        v.categories = categories;
        v.direction = direction;
        out.push_back(v);
      }
    }
  }
  return out;
}

AuditConfig SmallConfig() {
  AuditConfig c;
  c.n_splits = 4;
  c.split_fraction = 0.25;
  c.consistency_quorum = 3;
  c.consolidation_repetitions = 5;
  c.seed = 11;
  return c;
}

std::string CorpusText() {
  std::string out;
  const DimensionRegistry& registry = DimensionRegistry::Default();
  for (const char* name : {"gender", "religion"}) {
    const IdentityDimension& dim = *registry.Find(name);
    for (int i = 0; i < 80; ++i) {
      const std::string p = std::string(name) + "-p" + std::to_string(i);
      for (int c = 0; c < 2; ++c) {
        out += json{{"id", p + "-" + dim.categories[c]},
                    {"pair_id", p},
                    {"dimension", name},
                    {"category", dim.categories[c]},
                    {"expression", "explicit"},
                    {"text", "t " + dim.categories[c]}}
                   .dump() +
               "\n";
      }
    }
  }
  return out;
}

// A small audit over two bases and datasets D1..D4 (D2 before D10 matters
// for ordering, so D10 is included as well).
std::vector<BiasVerdict> SmallAudit(const Corpus& corpus) {
  std::vector<ModelScores> models;
  int k = 0;
  for (const char* base : {"mBERT", "BanglaBERT"}) {
    for (const char* ds : {"D10", "D1", "D2", "D3"}) {
      const std::string id = std::string(ds) + "-" + base;
      const MockScorerSpec spec{.base_mean = 0.5,
                                .noise_sd = 0.1,
                                .planted_bias = {{k % 2 ? "male" : "Muslim", 0.1}},
                                .seed = rng::HashString(id)};
      ++k;
      ModelScores m{id, {}};
      for (const auto& p : corpus.pairs) {
        m.by_sentence[p.left.id] = MockScore(spec, p.left);
        m.by_sentence[p.right.id] = MockScore(spec, p.right);
      }
      models.push_back(std::move(m));
    }
  }
  return RunAudit(models, corpus, SmallConfig());
}

class RenderedReportTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    corpus_ = new Corpus(ParseCorpus(CorpusText(), CorpusFormat::kJsonl));
    verdicts_ = new std::vector<BiasVerdict>(SmallAudit(*corpus_));
  }
  static void TearDownTestSuite() {
    delete verdicts_;
    delete corpus_;
  }
  AuditReport Build(std::span<const Rq2Result> rq2 = {}) const {
    return BuildReport(*verdicts_, rq2, {"synthetic", "sha256:00", {}, "test"});
  }

  static Corpus* corpus_;
  static std::vector<BiasVerdict>* verdicts_;
};
Corpus* RenderedReportTest::corpus_ = nullptr;
std::vector<BiasVerdict>* RenderedReportTest::verdicts_ = nullptr;

TEST(PercentTest, HalfUp) {
  EXPECT_EQ(PercentHalfUp(1, 8), 13);   // 12.5
  EXPECT_EQ(PercentHalfUp(3, 8), 38);   // 37.5
  EXPECT_EQ(PercentHalfUp(1, 3), 33);
  EXPECT_EQ(PercentHalfUp(2, 3), 67);
  EXPECT_EQ(PercentHalfUp(1, 200), 1);  // 0.5
  EXPECT_EQ(PercentHalfUp(0, 7), 0);
  EXPECT_EQ(PercentHalfUp(7, 7), 100);
}

TEST(SummarizeTest, ReferencePercentages) {
  for (const char* dimension : {"gender", "religion", "nationality"}) {
    const json doc =
        json::parse(testing::ReadData("audit_directions.json"))["dimensions"][dimension];
    const auto verdicts = DirectionVerdicts(dimension);
    ASSERT_EQ(verdicts.size(), 38u) << dimension;
    const auto summaries = Summarize(verdicts);
    ASSERT_EQ(summaries.size(), 1u);
    const DimensionSummary& s = summaries[0];
    EXPECT_EQ(s.total, 38);
    for (const auto& [category, percent] : doc["percent"].items()) {
      ASSERT_NE(s.Find(category), nullptr) << category;
      EXPECT_EQ(s.Find(category)->percent, percent.get<int>()) << dimension << " " << category;
    }
  }
}

TEST(SummarizeTest, CountsPartitionVerdicts) {
  std::vector<BiasVerdict> all;
  for (const char* d : {"gender", "religion", "nationality"}) {
    const auto v = DirectionVerdicts(d);
    all.insert(all.end(), v.begin(), v.end());
  }
  const auto summaries = Summarize(all);
  ASSERT_EQ(summaries.size(), 3u);
  EXPECT_EQ(summaries[0].dimension, "gender");
  EXPECT_EQ(summaries[2].dimension, "nationality");
  for (const auto& s : summaries) {
    int sum = 0;
    for (const auto& r : s.rows) sum += r.count;
    EXPECT_EQ(sum, s.total);
    EXPECT_EQ(s.rows.size(), 3u);
    EXPECT_EQ(s.rows[2].direction, kNoDirection);
  }
}

TEST(SummarizeTest, SingletonAndErrors) {
  auto v = DirectionVerdicts("gender");
  v.resize(1);
  const auto s = Summarize(v);
  EXPECT_EQ(s[0].Find(v[0].direction)->percent, 100);
  EXPECT_THROW(Summarize(std::vector<BiasVerdict>{}), ValidationError);
  v[0].direction = "Hindu";
  EXPECT_THROW(Summarize(v), ValidationError);
}

TEST(CompressIdsTest, Runs) {
  EXPECT_EQ(CompressIds({"D1", "D2", "D4", "D5", "D6"}), "D1, D2, D4-D6");
  EXPECT_EQ(CompressIds({"D10", "D9", "D8", "D2"}), "D2, D8-D10");
  EXPECT_EQ(CompressIds({"D1", "D3", "D5"}), "D1, D3, D5");
  EXPECT_EQ(CompressIds({"x", "D1", "D2", "D3"}), "D1-D3, x");
  EXPECT_EQ(CompressIds({}), "");
}

TEST(ReportFormatTest, Names) {
  for (auto f : {ReportFormat::kJson, ReportFormat::kCsv, ReportFormat::kMarkdown}) {
    EXPECT_EQ(ParseReportFormat(ReportFormatName(f)), f);
  }
  EXPECT_EQ(ParseReportFormat("md"), ReportFormat::kMarkdown);
  EXPECT_THROW(ParseReportFormat("xml"), UsageError);
}

TEST_F(RenderedReportTest, LayoutAndProvenance) {
  const AuditReport r = Build();
  EXPECT_EQ(r.schema_version, kReportSchemaVersion);
  EXPECT_EQ(r.config, SmallConfig());
  EXPECT_EQ(r.provenance.model_ids.size(), 8u);
  ASSERT_EQ(r.dimensions.size(), 2u);
  for (const auto& d : r.dimensions) {
    EXPECT_FALSE(d.rq2.has_value());
    ASSERT_EQ(d.verdicts.size(), 8u);
    EXPECT_EQ(d.verdicts[0].model_id, "D1-BanglaBERT");
    EXPECT_EQ(d.verdicts[3].model_id, "D10-BanglaBERT");
    EXPECT_EQ(d.verdicts[4].model_id, "D1-mBERT");
    for (const auto& v : d.verdicts) EXPECT_EQ(v.splits.size(), 4u);
    EXPECT_EQ(d.heatmap.datasets, (std::vector<std::string>{"D1", "D2", "D3", "D10"}));
    EXPECT_EQ(d.heatmap.bases, (std::vector<std::string>{"BanglaBERT", "mBERT"}));
  }
}

TEST_F(RenderedReportTest, HeatmapCellsSumToSplits) {
  const AuditReport r = Build();
  for (const auto& d : r.dimensions) {
    for (const auto& c : d.heatmap.cells) {
      EXPECT_EQ(c.counts[0] + c.counts[1] + c.ties, r.config.n_splits);
    }
  }
}

TEST_F(RenderedReportTest, SummaryMatchesVerdictRows) {
  const AuditReport r = Build();
  for (const auto& d : r.dimensions) {
    for (const auto& row : d.summary.rows) {
      int n = 0;
      for (const auto& v : d.verdicts) n += v.direction == row.direction;
      EXPECT_EQ(row.count, n) << d.dimension << " " << row.direction;
    }
  }
}

TEST_F(RenderedReportTest, RenderingIsDeterministic) {
  const AuditReport r = Build();
  for (auto f : {ReportFormat::kJson, ReportFormat::kCsv, ReportFormat::kMarkdown}) {
    EXPECT_EQ(Render(r, f), Render(Build(), f)) << ReportFormatName(f);
  }
}

TEST_F(RenderedReportTest, JsonRoundTripIsByteExact) {
  const AuditReport r = Build();
  const std::string text = Render(r, ReportFormat::kJson);
  const AuditReport back = ParseReportJson(text);
  EXPECT_EQ(Render(back, ReportFormat::kJson), text);
  EXPECT_EQ(back, r);
  const json j = json::parse(text);
  EXPECT_EQ(j["schema_version"], kReportSchemaVersion);
  EXPECT_EQ(j["provenance"]["corpus_digest"], "sha256:00");
}

TEST_F(RenderedReportTest, CsvShape) {
  const std::string csv = Render(Build(), ReportFormat::kCsv);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line,
            "schema_version,dimension,category_a,category_b,dataset,"
            "BanglaBERT:a,BanglaBERT:b,mBERT:a,mBERT:b");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 8) << line;
    EXPECT_EQ(line.rfind("1,", 0), 0u) << line;
  }
  EXPECT_EQ(rows, 8);  // 2 dimensions x 4 datasets
}

TEST_F(RenderedReportTest, MarkdownDirectionTable) {
  const AuditReport r = Build();
  const std::string md = Render(r, ReportFormat::kMarkdown);
  for (const auto& d : r.dimensions) {
    const std::string heading = "## " + d.dimension + "\n";
    const size_t at = md.find(heading);
    ASSERT_NE(at, std::string::npos) << d.dimension;
    const size_t table = md.find("| Direction | BanglaBERT | mBERT |", at);
    ASSERT_NE(table, std::string::npos);
    for (const std::string& row : {"| toward " + d.categories[0] + " |",
                                   "| toward " + d.categories[1] + " |",
                                   std::string("| no/rare |")}) {
      EXPECT_NE(md.find(row, table), std::string::npos) << row;
    }
    EXPECT_NE(md.find("Summary over 8 models:", at), std::string::npos);
  }
  EXPECT_EQ(md.find("Direction vs. developer demographics"), std::string::npos);
}

TEST_F(RenderedReportTest, Rq2SectionWhenProvided) {
  std::vector<DeveloperProfile> profiles;
  for (const char* ds : {"D1", "D2", "D3", "D10"}) {
    DeveloperProfile p{ds, {}};
    p.categories["gender"] = {std::string(ds) == "D2" ? "female" : "male"};
    profiles.push_back(p);
  }
  const std::vector<Rq2Result> rq2 = {
      RunRq2(*verdicts_, profiles, *DimensionRegistry::Default().Find("gender"))};
  const AuditReport r = Build(rq2);
  ASSERT_TRUE(r.dimensions[0].rq2.has_value());
  EXPECT_FALSE(r.dimensions[1].rq2.has_value());
  EXPECT_EQ(r.dimensions[0].rq2->models.size(), 8u);
  const std::string text = Render(r, ReportFormat::kJson);
  EXPECT_EQ(Render(ParseReportJson(text), ReportFormat::kJson), text);
  EXPECT_NE(Render(r, ReportFormat::kMarkdown).find("Direction vs. developer demographics"),
            std::string::npos);

  Rq2Result stray = rq2[0];
  stray.dimension = "nationality";
  const std::vector<Rq2Result> bad = {stray};
  EXPECT_THROW(Build(bad), ValidationError);
}

TEST(ReportErrorsTest, Malformed) {
  EXPECT_THROW(BuildReport(std::vector<BiasVerdict>{}, {}, {}), ValidationError);
  EXPECT_THROW(ParseReportJson("{"), ValidationError);
  EXPECT_THROW(ParseReportJson("{\"schema_version\":1}"), ValidationError);
  EXPECT_THROW(ParseReportJson("{\"schema_version\":99}"), ValidationError);
}

}  // namespace
}  // namespace bab
