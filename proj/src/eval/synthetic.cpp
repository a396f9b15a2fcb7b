#include "clr/eval/synthetic.hpp"

#include <array>
#include <stdexcept>
#include <unordered_set>

#include "clr/rng.hpp"

namespace clr {
namespace {

// Six slots filled by an ordered draw of distinct nouns from one shared
// pool, embedded in a long fixed skeleton. The skeleton is common to every
// sentence and the spans deleted by the default augmentation are two tokens
// wide at this length, so deletions shift the positions of everything after
// them: an untrained encoder sees mostly position noise and retrieves
// positive pairs at chance. What identifies a sentence is which nouns appear
// and where, which a trained encoder can pick up. Two surface forms of the
// same draw make genuine paraphrases; permuting the same nouns across slots
// makes bag-identical unrelated pairs.
constexpr std::array<const char*, 48> kNouns = {
    "doctor", "teacher", "sailor", "writer",  "farmer", "singer",
    "painter", "dancer", "hunter", "miner",   "baker",  "tailor",
    "lawyer", "barber",  "priest", "guard",   "clerk",  "judge",
    "pilot",  "nurse",   "smith",  "monk",    "poet",   "scout",
    "horse",  "camel",   "otter",  "raven",   "tiger",  "rabbit",
    "donkey", "falcon",  "badger", "weasel",  "heron",  "moose",
    "goat",   "crow",    "wolf",   "bear",    "deer",   "fox",
    "owl",    "hare",    "seal",   "swan",    "mule",   "lynx"};

constexpr std::size_t kSlots = 6;

struct Content {
  std::array<std::size_t, kSlots> slot;  // distinct indices into kNouns

  std::size_t differing_slots(const Content& o) const {
    std::size_t d = 0;
    for (std::size_t i = 0; i < kSlots; ++i) d += slot[i] != o.slot[i];
    return d;
  }
};

Content draw_content(Rng& rng) {
  const auto picks = rng.sample_distinct(kSlots, static_cast<std::int32_t>(kNouns.size()));
  std::vector<std::size_t> order(picks.begin(), picks.end());
  rng.shuffle(order);
  Content c{};
  for (std::size_t i = 0; i < kSlots; ++i) c.slot[i] = order[i];
  return c;
}

const char* word(const Content& c, std::size_t i) { return kNouns[c.slot[i]]; }

std::string surface_plain(const Content& c) {
  std::string s;
  s += "the ";
  s += word(c, 0);
  s += " met the ";
  s += word(c, 1);
  s += " at noon by the gate while the ";
  s += word(c, 2);
  s += " walked with the ";
  s += word(c, 3);
  s += " along the road and the ";
  s += word(c, 4);
  s += " helped the ";
  s += word(c, 5);
  s += " to carry the heavy box before they all turned back toward the old house .";
  return s;
}

std::string surface_fronted(const Content& c) {
  std::string s;
  s += "the ";
  s += word(c, 0);
  s += " saw the ";
  s += word(c, 1);
  s += " at dusk by the door as the ";
  s += word(c, 2);
  s += " rested with the ";
  s += word(c, 3);
  s += " beside the river and the ";
  s += word(c, 4);
  s += " joined the ";
  s += word(c, 5);
  s += " to gather the fallen leaves after they all moved down toward the new bridge .";
  return s;
}

std::string render(const Content& c, bool fronted) {
  return fronted ? surface_fronted(c) : surface_plain(c);
}

}  // namespace

std::vector<std::string> synthetic_corpus(std::size_t n, std::uint64_t seed,
                                          const std::vector<std::string>* exclude) {
  Rng rng(mix_seed(seed, 0x5C01ULL));
  std::unordered_set<std::string> seen;
  if (exclude)
    for (const auto& s : *exclude) seen.insert(s);
  std::vector<std::string> out;
  out.reserve(n);
  std::size_t attempts = 0;
  while (out.size() < n) {
    if (++attempts > 1000 * (n + 1))
      throw std::runtime_error("synthetic corpus generation stalled");
    // Both surface forms appear in the corpus so neither is out of
    // vocabulary at evaluation time.
    auto sentence = render(draw_content(rng), rng.below(2) == 1);
    if (seen.insert(sentence).second) out.push_back(std::move(sentence));
  }
  return out;
}

std::vector<EvalPair> synthetic_eval_pairs(std::size_t n_paraphrase, std::size_t n_unrelated,
                                           std::uint64_t seed) {
  Rng rng(mix_seed(seed, 0x5C02ULL));
  std::vector<EvalPair> pairs;
  pairs.reserve(n_paraphrase + n_unrelated);
  for (std::size_t i = 0; i < n_paraphrase; ++i) {
    const auto c = draw_content(rng);
    pairs.push_back({surface_plain(c), surface_fronted(c), 1.0});
  }
  for (std::size_t i = 0; i < n_unrelated; ++i) {
    // Same nouns, scrambled roles: invisible to an encoder that ignores
    // positions, which is what keeps the eval honest.
    const Content a = draw_content(rng);
    Content b = a;
    do {
      std::vector<std::size_t> order(b.slot.begin(), b.slot.end());
      rng.shuffle(order);
      for (std::size_t s = 0; s < kSlots; ++s) b.slot[s] = order[s];
    } while (a.differing_slots(b) < 4);
    pairs.push_back({surface_plain(a), surface_fronted(b), 0.0});
  }
  return pairs;
}

SynonymLexicon synthetic_lexicon() {
  // Skeleton fillers paired across the two surface forms, so substitution
  // keeps roles intact and every synonym is in the corpus vocabulary.
  return SynonymLexicon::from_entries({
      {"met", {"saw"}},       {"saw", {"met"}},
      {"noon", {"dusk"}},     {"dusk", {"noon"}},
      {"gate", {"door"}},     {"door", {"gate"}},
      {"while", {"as"}},      {"as", {"while"}},
      {"walked", {"rested"}}, {"rested", {"walked"}},
      {"along", {"beside"}},  {"beside", {"along"}},
      {"road", {"river"}},    {"river", {"road"}},
      {"helped", {"joined"}}, {"joined", {"helped"}},
      {"carry", {"gather"}},  {"gather", {"carry"}},
      {"heavy", {"fallen"}},  {"fallen", {"heavy"}},
      {"box", {"leaves"}},    {"leaves", {"box"}},
      {"before", {"after"}},  {"after", {"before"}},
      {"turned", {"moved"}},  {"moved", {"turned"}},
      {"back", {"down"}},     {"down", {"back"}},
      {"old", {"new"}},       {"new", {"old"}},
      {"house", {"bridge"}},  {"bridge", {"house"}},
  });
}

}  // namespace clr
