// Copyright 2026 The SEMDR Authors.
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

#include "synthetic.hpp"

#include <array>
#include <sstream>
#include <vector>

#include "semdr/rng.hpp"

namespace semdr::testing {
namespace {

using Terms = std::vector<std::string>;

struct Profile {
  std::string charge;
  std::string article;
  std::string imprisonment;
  Terms motivation;
  Terms action;
  Terms harm;
};

const std::array<Profile, 3>& profiles() {
  static const std::array<Profile, 3> p{{
      {"robbery", "Article 263", "36-60 months", {"greed", "drug addiction"},
       {"forcibly seized", "threatened with a knife", "grabbed by force"}, {"minor injury", "head wounds"}},
      {"theft", "Article 264", "6-12 months", {"poverty", "gambling losses"},
       {"secretly took", "pickpocketed", "stole at night"}, {"property loss", "a missing wallet"}},
      {"fraud", "Article 266", "12-36 months", {"easy money", "business debts"},
       {"fabricated an invoice", "posed as an official", "faked a loan contract"}, {"financial loss", "lost savings"}},
  }};
  return p;
}

const Terms kSharedMotivation{"greed", "poverty", "debts", "revenge"};
const Terms kSharedHarm{"property loss", "financial loss", "minor injury"};
const Terms kSharedAction{"took the phone", "took the money"};

const Terms kNames{"Li Ming", "Wang Fang", "Zhao Lei", "Chen Jie", "Liu Yang", "Sun Hao",
                   "Zhou Qing", "Wu Tao", "Zheng Yu", "Feng Lin", "Xu Bo", "Ma Rui"};
const Terms kPlaces{"Harbor district", "North county", "Old town", "River village", "East market",
                    "the railway station"};
const Terms kObjects{"a phone", "a handbag", "cash", "a bicycle", "jewelry", "a laptop", "a watch",
                     "bank cards"};
const Terms kEvidence{"witnesses", "surveillance video", "bank records", "the defendant's confession"};

const std::string& pick(Rng& rng, const Terms& terms) { return terms[rng.uniform(terms.size())]; }

Terms unique_actions(const Profile& p) { return {p.action[0], p.action[1]}; }

std::string document(Rng& rng, const Profile& p, size_t charge, const SyntheticOptions& o) {
  const std::string& name = pick(rng, kNames);
  std::string mot, act, harm, statement;
  if (o.confusable) {
    mot = pick(rng, kSharedMotivation);
    harm = pick(rng, kSharedHarm);
    act = rng.uniform_real() < o.shared_action_rate ? pick(rng, kSharedAction) : pick(rng, unique_actions(p));
    const size_t other = (charge + 1 + rng.uniform(2)) % 3;
    statement = "the prosecutor alleges " + name + " " + pick(rng, unique_actions(profiles()[other])) +
                " on an earlier occasion.";
  } else {
    mot = pick(rng, p.motivation);
    act = pick(rng, p.action);
    harm = pick(rng, p.harm);
    statement = "the prosecutor brings a case against " + name + ".";
  }
  std::ostringstream doc;
  doc << "Prosecution statement: " << statement << " Date: 2017-" << (1 + rng.uniform(12)) << "-"
      << (1 + rng.uniform(28)) << ". Place: " << pick(rng, kPlaces) << ". Process: The hearing opened. "
      << "The court found that " << name << ", driven by " << mot << ", " << act << " " << pick(rng, kObjects)
      << " from the victim, causing " << harm << ". The above facts are confirmed by "
      << pick(rng, kEvidence) << ".";
  return doc.str();
}

}  // namespace

std::string synthetic_jsonl(const SyntheticOptions& o) {
  Rng rng(derive_seed(o.seed, 0x5e7));
  std::ostringstream out;
  size_t serial = 0;
  for (size_t k = 0; k < o.cases_per_charge; ++k) {
    for (size_t c = 0; c < profiles().size(); ++c) {
      const Profile& p = profiles()[c];
      nlohmann::ordered_json rec;
      rec["id"] = "s" + std::to_string(serial++);
      rec["fact"] = document(rng, p, c, o);
      rec["labels"] = {{"imprisonment", p.imprisonment}, {"charge", p.charge}, {"article", p.article}};
      out << rec.dump() << "\n";
    }
  }
  return out.str();
}

Corpus synthetic_corpus(const SyntheticOptions& o) {
  std::istringstream in(synthetic_jsonl(o));
  return load_corpus(in);
}

nlohmann::json synthetic_lexicon_json(bool confusable) {
  Terms mot, act, harm;
  auto add = [](Terms& dst, const Terms& src) { dst.insert(dst.end(), src.begin(), src.end()); };
  if (confusable) {
    mot = kSharedMotivation;
    harm = kSharedHarm;
    for (const Profile& p : profiles()) add(act, unique_actions(p));
    add(act, kSharedAction);
  } else {
    for (const Profile& p : profiles()) {
      add(mot, p.motivation);
      add(act, p.action);
      add(harm, p.harm);
    }
  }
  return {{"motivation", mot},
          {"action", act},
          {"harm", harm},
          {"templates", {{{"start", "The court found that"}, {"end", "The above facts"}}}},
          {"sections",
           {{"statement", "Prosecution statement:"},
            {"date", "Date:"},
            {"location", "Place:"},
            {"process", "Process:"}}}};
}

PipelineConfig quick_pipeline(uint64_t seed, size_t epochs) {
  PipelineConfig c;
  c.seed = seed;
  c.encoder.buckets = 1024;
  c.encoder.dim = 32;
  c.contrastive.epochs = 5;
  c.train.epochs = epochs;
  return c;
}

Lexicon synthetic_lexicon(bool confusable) { return Lexicon::from_json(synthetic_lexicon_json(confusable)); }

}  // namespace semdr::testing
