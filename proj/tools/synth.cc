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

#include "synth.h"

#include <fstream>
#include <nlohmann/json.hpp>

#include "bab/errors.h"
#include "bab/rng.h"

namespace bab::synth {
namespace {

void WriteText(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path.string() + "'");
  out << content;
}

std::string Padded(int i) {
  std::string s = std::to_string(i);
  return std::string(s.size() < 4 ? 4 - s.size() : 0, '0') + s;
}

}  // namespace

Fixture MakeFixture(const FixtureOptions& options) {
  if (options.pairs_per_dimension < 1 || options.datasets < 1 || options.bases.empty()) {
    throw UsageError("synthetic fixture needs pairs, datasets, and bases");
  }
  const DimensionRegistry registry = DimensionRegistry::Default();
  const auto& dims = registry.dimensions();
  Corpus draft;
  draft.provenance = "synthetic fixture, seed " + std::to_string(options.seed);
  for (size_t d = 0; d < dims.size(); ++d) {
    const IdentityDimension& dim = dims[d];
    draft.dimensions.push_back(dim);
    for (int i = 0; i < options.pairs_per_dimension; ++i) {
      EvaluationPair p;
      p.pair_id = dim.name + "-" + Padded(i);
      p.dimension = dim.name;
      p.expression = i % 2 == 0 ? Expression::kExplicit : Expression::kImplicit;
      for (int side = 0; side < 2; ++side) {
        EvaluationSentence s;
        s.id = p.pair_id + (side == 0 ? "-a" : "-b");
        s.text = "template " + std::to_string(i) + " about a " + dim.categories[side] +
                 " person";
        s.dimension = dim.name;
        s.category = dim.categories[side];
        s.expression = p.expression;
        s.pair_id = p.pair_id;
        (side == 0 ? p.left : p.right) = std::move(s);
      }
      draft.pairs.push_back(std::move(p));
    }
    if (d + 1 == dims.size()) {
      for (int c = 0; c < 2; ++c) {
        for (int i = 0; i < options.unpaired_per_category; ++i) {
          EvaluationSentence s;
          s.id = dim.name + "-u" + std::to_string(c) + "-" + Padded(i);
          s.text = "free sentence " + std::to_string(i) + " on " + dim.categories[c];
          s.dimension = dim.name;
          s.category = dim.categories[c];
          s.expression = Expression::kImplicit;
          draft.unpaired.push_back(std::move(s));
        }
      }
    }
  }

  Fixture f;
  // Normalize through the canonical serialization.
  f.corpus = ParseCorpus(SerializeCorpus(draft, CorpusFormat::kJsonl), CorpusFormat::kJsonl);

  for (int k = 1; k <= options.datasets; ++k) {
    for (const auto& base : options.bases) {
      const std::string id = "D" + std::to_string(k) + "-" + base;
      MockScorerSpec spec;
      spec.base_mean = 0.5;
      spec.noise_sd = options.noise_sd;
      spec.seed = rng::DeriveSeed(options.seed, {rng::HashString(id)});
      if (k % 3 != 0) {
        const double sign = k % 3 == 1 ? 1.0 : -1.0;
        for (const auto& dim : dims) {
          spec.planted_bias[dim.categories[0]] = sign * options.bias / 2;
          spec.planted_bias[dim.categories[1]] = -sign * options.bias / 2;
        }
      }
      for (const auto& dim : dims) {
        for (const EvaluationSentence* s : f.corpus.SentencesFor(dim.name)) {
          f.scores.Insert({s->id, id, MockScore(spec, *s)});
        }
      }
      f.models.emplace_back(id, spec);
    }
    DeveloperProfile p;
    p.dataset_id = "D" + std::to_string(k);
    for (const auto& dim : dims) {
      p.categories[dim.name] = {dim.categories[k % 2]};
    }
    f.profiles.push_back(std::move(p));
  }
  return f;
}

void WriteFixture(const Fixture& fixture, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "mock");
  SaveCorpus(fixture.corpus, dir / "corpus.jsonl", CorpusFormat::kJsonl);
  SaveScores(fixture.scores, dir / "scores.jsonl");
  std::string profiles;
  for (const auto& p : fixture.profiles) {
    nlohmann::ordered_json j;
    j["dataset_id"] = p.dataset_id;
    for (const auto& [dim, cats] : p.categories) j[dim] = cats;
    profiles += j.dump() + "\n";
  }
  WriteText(dir / "profiles.jsonl", profiles);
  for (const auto& [id, spec] : fixture.models) {
    WriteText(dir / "mock" / (id + ".json"), SerializeMockSpec(spec) + "\n");
  }
}

}  // namespace bab::synth
