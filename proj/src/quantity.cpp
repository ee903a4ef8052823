#include "crowdspan/quantity.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "crowdspan/error.hpp"
#include "crowdspan/utf8.hpp"

namespace crowdspan {

namespace {

constexpr std::array<std::string_view, 10> kMultibytePunct = {
    "“", "”", "‘", "’", "—", "–", "…", "«", "»", "¿"};

bool is_space_at(std::string_view text, std::size_t i, std::size_t* width) {
  const unsigned char c = static_cast<unsigned char>(text[i]);
  if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
    *width = 1;
    return true;
  }
  // U+00A0 no-break space
  if (c == 0xC2 && i + 1 < text.size() && static_cast<unsigned char>(text[i + 1]) == 0xA0) {
    *width = 2;
    return true;
  }
  return false;
}

// Width of a punctuation character starting at i, or 0.
std::size_t punct_prefix(std::string_view s) {
  if (s.empty()) return 0;
  const unsigned char c = static_cast<unsigned char>(s[0]);
  if (c < 0x80) return std::ispunct(c) ? 1 : 0;
  for (auto p : kMultibytePunct) {
    if (s.starts_with(p)) return p.size();
  }
  return 0;
}

std::size_t punct_suffix(std::string_view s) {
  if (s.empty()) return 0;
  const unsigned char c = static_cast<unsigned char>(s.back());
  if (c < 0x80) return std::ispunct(c) ? 1 : 0;
  for (auto p : kMultibytePunct) {
    if (s.ends_with(p)) return p.size();
  }
  return 0;
}

void push_token(std::vector<Token>& out, std::string_view text, std::size_t start, std::size_t end) {
  out.push_back(Token{std::string(text.substr(start, end - start)), start, end, out.size()});
}

// Splits one whitespace-free chunk [start, end) into leading punctuation,
// a core token, and trailing punctuation.
void split_chunk(std::vector<Token>& out, std::string_view text, std::size_t start, std::size_t end) {
  std::size_t lo = start;
  std::size_t hi = end;
  while (lo < hi) {
    const std::size_t w = punct_prefix(text.substr(lo, hi - lo));
    if (w == 0) break;
    push_token(out, text, lo, lo + w);
    lo += w;
  }
  std::vector<std::pair<std::size_t, std::size_t>> trailing;
  while (hi > lo) {
    const std::size_t w = punct_suffix(text.substr(lo, hi - lo));
    if (w == 0) break;
    trailing.emplace_back(hi - w, hi);
    hi -= w;
  }
  if (lo < hi) push_token(out, text, lo, hi);
  for (auto it = trailing.rbegin(); it != trailing.rend(); ++it) push_token(out, text, it->first, it->second);
}

bool is_terminal(std::string_view t) { return t == "." || t == "!" || t == "?"; }

bool is_closer(std::string_view t) {
  return t == ")" || t == "]" || t == "\"" || t == "'" || t == "”" || t == "’";
}

constexpr std::array<std::string_view, 40> kAbbreviations = {
    "mr",   "mrs",  "ms",   "dr",   "st",   "jr",   "sr",   "prof", "gov",  "sen",
    "rep",  "gen",  "lt",   "col",  "sgt",  "capt", "rev",  "mt",   "ft",   "ave",
    "blvd", "no",   "vs",   "etc",  "inc",  "co",   "corp", "ltd",  "u.s",  "u.n",
    "d.c",  "jan",  "feb",  "aug",  "sept", "oct",  "nov",  "dec",  "approx", "est"};

bool is_abbreviation(std::string_view token) {
  if (token.size() == 1 && std::isupper(static_cast<unsigned char>(token[0]))) return true;
  const std::string lowered = to_lower(token);
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), lowered) != kAbbreviations.end();
}

// --- number-word grammar ---------------------------------------------------

enum class AtomKind { Digit, Unit, Teen, Tens, TensUnit, Hundred, Dozen, Thousand, Million, Plural, Mult, And, Of };

struct Atom {
  AtomKind kind;
  std::uint64_t value = 0;
  std::uint64_t base = 0;  // plurals only
  bool bare_tens = false;  // plural "tens" needs "of <plural>"
};

constexpr std::uint64_t kDigitCap = 1'000'000'000'000ULL;

std::optional<std::uint64_t> parse_digits(std::string_view w) {
  if (w.empty()) return std::nullopt;
  bool grouped = w.find(',') != std::string_view::npos;
  if (grouped) {
    // 1-3 leading digits, then ",ddd" groups.
    auto first_comma = w.find(',');
    if (first_comma == 0 || first_comma > 3) return std::nullopt;
    for (std::size_t i = first_comma; i < w.size(); i += 4) {
      if (w[i] != ',' || i + 4 > w.size()) return std::nullopt;
    }
  }
  std::uint64_t v = 0;
  for (char c : w) {
    if (c == ',') continue;
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
    if (v > kDigitCap) return std::nullopt;
  }
  if (v == 0) return std::nullopt;
  return v;
}

std::optional<std::uint64_t> unit_value(std::string_view w) {
  static constexpr std::array<std::string_view, 9> kUnits = {"one", "two",   "three", "four", "five",
                                                              "six", "seven", "eight", "nine"};
  for (std::size_t i = 0; i < kUnits.size(); ++i)
    if (kUnits[i] == w) return i + 1;
  return std::nullopt;
}

std::optional<std::uint64_t> teen_value(std::string_view w) {
  static constexpr std::array<std::string_view, 10> kTeens = {
      "ten", "eleven", "twelve", "thirteen", "fourteen", "fifteen", "sixteen", "seventeen", "eighteen", "nineteen"};
  for (std::size_t i = 0; i < kTeens.size(); ++i)
    if (kTeens[i] == w) return i + 10;
  return std::nullopt;
}

std::optional<std::uint64_t> tens_value(std::string_view w) {
  static constexpr std::array<std::string_view, 8> kTens = {"twenty", "thirty",  "forty",  "fifty",
                                                            "sixty",  "seventy", "eighty", "ninety"};
  for (std::size_t i = 0; i < kTens.size(); ++i)
    if (kTens[i] == w) return (i + 2) * 10;
  return std::nullopt;
}

std::optional<std::uint64_t> scale_base(std::string_view singular) {
  if (singular == "ten") return 10;
  if (singular == "dozen") return 12;
  if (singular == "hundred") return 100;
  if (singular == "thousand") return 1000;
  if (singular == "million") return 1'000'000;
  return std::nullopt;
}

std::optional<Atom> lex_word(std::string_view w, const VagueTable& vague) {
  if (auto d = parse_digits(w)) return Atom{AtomKind::Digit, *d};
  if (auto u = unit_value(w)) return Atom{AtomKind::Unit, *u};
  if (auto t = teen_value(w)) return Atom{AtomKind::Teen, *t};
  if (auto t = tens_value(w)) return Atom{AtomKind::Tens, *t};
  if (w == "hundred") return Atom{AtomKind::Hundred, 100};
  if (w == "dozen") return Atom{AtomKind::Dozen, 12};
  if (w == "thousand") return Atom{AtomKind::Thousand, 1000};
  if (w == "million") return Atom{AtomKind::Million, 1'000'000};
  if (w == "and") return Atom{AtomKind::And};
  if (w == "of") return Atom{AtomKind::Of};
  if (auto it = vague.plurals.find(std::string(w)); it != vague.plurals.end()) {
    const auto base = scale_base(w.substr(0, w.size() - 1));
    if (!base) return std::nullopt;
    return Atom{AtomKind::Plural, it->second, *base, w == "tens"};
  }
  if (auto it = vague.multipliers.find(std::string(w)); it != vague.multipliers.end())
    return Atom{AtomKind::Mult, it->second};
  if (auto dash = w.find('-'); dash != std::string_view::npos) {
    auto tens = tens_value(w.substr(0, dash));
    auto unit = unit_value(w.substr(dash + 1));
    if (tens && unit) return Atom{AtomKind::TensUnit, *tens + *unit};
  }
  return std::nullopt;
}

std::optional<std::vector<Atom>> lex(std::span<const std::string> words, const VagueTable& vague) {
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const std::string w = to_lower(words[i]);
    if (i + 1 < words.size()) {
      const std::string pair = w + " " + to_lower(words[i + 1]);
      if (auto it = vague.multipliers.find(pair); it != vague.multipliers.end()) {
        atoms.push_back(Atom{AtomKind::Mult, it->second});
        ++i;
        continue;
      }
    }
    auto atom = lex_word(w, vague);
    if (!atom) return std::nullopt;
    atoms.push_back(*atom);
  }
  return atoms;
}

// Recursive-descent parser over atoms. Every method returns nullopt on a
// grammar violation; parse() additionally requires full consumption.
class NumberGrammar {
 public:
  explicit NumberGrammar(const std::vector<Atom>& atoms) : atoms_(atoms) {}

  std::optional<std::uint64_t> parse() {
    if (atoms_.empty()) return std::nullopt;
    if (atoms_[0].kind == AtomKind::Plural) return parse_plural();
    return parse_cardinal();
  }

 private:
  enum class GroupKind { Plain, NeedsScale, Closed };
  struct Group {
    std::uint64_t value;
    GroupKind kind;
  };

  bool at(AtomKind k) const { return pos_ < atoms_.size() && atoms_[pos_].kind == k; }
  bool done() const { return pos_ == atoms_.size(); }

  std::optional<std::uint64_t> parse_plural() {
    const Atom& head = atoms_[0];
    if (atoms_.size() == 1) {
      if (head.bare_tens) return std::nullopt;
      return head.value;
    }
    if (atoms_.size() == 3 && atoms_[1].kind == AtomKind::Of && atoms_[2].kind == AtomKind::Plural &&
        atoms_[2].base > head.base) {
      return head.value * atoms_[2].base;
    }
    return std::nullopt;
  }

  // Below one hundred: "forty-two", "forty two", "thirteen", "seven".
  std::optional<std::uint64_t> parse_tens_part() {
    if (at(AtomKind::TensUnit) || at(AtomKind::Teen) || at(AtomKind::Unit)) return atoms_[pos_++].value;
    if (at(AtomKind::Tens)) {
      std::uint64_t v = atoms_[pos_++].value;
      if (at(AtomKind::Unit)) v += atoms_[pos_++].value;
      return v;
    }
    return std::nullopt;
  }

  // Optional "[and] <tens part>" after a hundred.
  std::optional<std::uint64_t> hundred_tail(std::uint64_t hundreds) {
    const std::size_t save = pos_;
    if (at(AtomKind::And)) {
      ++pos_;
      if (auto rest = parse_tens_part()) return hundreds + *rest;
      pos_ = save;
      return std::nullopt;
    }
    if (auto rest = parse_tens_part()) return hundreds + *rest;
    return hundreds;
  }

  std::optional<Group> parse_group() {
    if (done()) return std::nullopt;
    const Atom a = atoms_[pos_];
    switch (a.kind) {
      case AtomKind::Digit:
      case AtomKind::Unit: {
        ++pos_;
        if (at(AtomKind::Hundred)) {
          ++pos_;
          if (a.kind == AtomKind::Digit) return Group{a.value * 100, GroupKind::Plain};
          auto v = hundred_tail(a.value * 100);
          if (!v) return std::nullopt;
          return Group{*v, GroupKind::Plain};
        }
        if (at(AtomKind::Dozen)) {
          ++pos_;
          return Group{a.value * 12, GroupKind::Closed};
        }
        return Group{a.value, GroupKind::Plain};
      }
      case AtomKind::Mult: {
        ++pos_;
        if (at(AtomKind::Hundred)) {
          ++pos_;
          return Group{a.value * 100, GroupKind::Plain};
        }
        if (at(AtomKind::Dozen)) {
          ++pos_;
          return Group{a.value * 12, GroupKind::Closed};
        }
        return Group{a.value, GroupKind::NeedsScale};
      }
      case AtomKind::Hundred: {
        ++pos_;
        auto v = hundred_tail(100);
        if (!v) return std::nullopt;
        return Group{*v, GroupKind::Plain};
      }
      case AtomKind::Dozen:
        ++pos_;
        return Group{12, GroupKind::Closed};
      case AtomKind::Tens:
      case AtomKind::TensUnit:
      case AtomKind::Teen: {
        auto v = parse_tens_part();
        if (!v) return std::nullopt;
        return Group{*v, GroupKind::Plain};
      }
      default:
        return std::nullopt;
    }
  }

  std::optional<std::uint64_t> scale_at() const {
    if (at(AtomKind::Million)) return 1'000'000;
    if (at(AtomKind::Thousand)) return 1000;
    return std::nullopt;
  }

  std::optional<std::uint64_t> parse_cardinal() {
    std::uint64_t total = 0;
    std::uint64_t last_scale = UINT64_MAX;
    bool any = false;

    // Bare leading scale word: "thousand" alone reads as one thousand.
    if (auto s = scale_at()) {
      ++pos_;
      total = *s;
      last_scale = *s;
      any = true;
    }

    while (!done()) {
      bool after_and = false;
      if (any && at(AtomKind::And)) {
        ++pos_;
        after_and = true;
      }
      const std::size_t group_start = pos_;
      auto group = parse_group();
      if (!group) return std::nullopt;
      if (after_and && (group->value >= 100 || pos_ - group_start == 0)) return std::nullopt;
      if (auto s = scale_at(); s && group->kind != GroupKind::Closed && !after_and) {
        if (*s >= last_scale) return std::nullopt;
        ++pos_;
        total += group->value * *s;
        last_scale = *s;
        any = true;
        continue;
      }
      if (group->kind == GroupKind::NeedsScale) return std::nullopt;
      total += group->value;
      any = true;
      if (!done()) return std::nullopt;
    }
    if (!any || total == 0) return std::nullopt;
    return total;
  }

  const std::vector<Atom>& atoms_;
  std::size_t pos_ = 0;
};

// Words that may appear anywhere inside a number phrase.
bool may_be_in_phrase(std::string_view lowered, const VagueTable& vague) {
  if (lex_word(lowered, vague)) return true;
  for (const auto& [key, _] : vague.multipliers) {
    if (key.find(' ') == std::string::npos) continue;
    std::string_view k = key;
    const auto space = k.find(' ');
    if (k.substr(0, space) == lowered || k.substr(space + 1) == lowered) return true;
  }
  return false;
}

bool is_year_like(const Token& t) {
  if (t.text.size() != 4) return false;
  if (!std::all_of(t.text.begin(), t.text.end(), [](char c) { return c >= '0' && c <= '9'; })) return false;
  const int v = std::stoi(t.text);
  return v >= 1900 && v <= 2099;
}

}  // namespace

MagnitudeLabel::MagnitudeLabel(int label) : label_(label) {
  if (label < 0 || label > kMax)
    throw DomainError("magnitude label must be in 0..3, got " + std::to_string(label));
}

const QuantityOptions& default_quantity_options() {
  static const QuantityOptions options;
  return options;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool matches_stem(std::string_view lowered_word, std::span<const std::string> stems) {
  return std::any_of(stems.begin(), stems.end(),
                     [&](const std::string& stem) { return lowered_word.starts_with(stem); });
}

std::string_view strip_punctuation(std::string_view word) {
  while (const std::size_t w = punct_prefix(word)) word.remove_prefix(w);
  while (const std::size_t w = punct_suffix(word)) word.remove_suffix(w);
  return word;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t w = 0;
    if (is_space_at(text, i, &w)) {
      i += w;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !is_space_at(text, j, &w)) {
      j += utf8_sequence_length(static_cast<unsigned char>(text[j]));
    }
    j = std::min(j, text.size());
    split_chunk(tokens, text, i, j);
    i = j;
  }
  return tokens;
}

std::vector<Sentence> segment_sentences(std::span<const Token> tokens) {
  std::vector<Sentence> sentences;
  std::size_t begin = 0;
  std::size_t i = 0;
  while (i < tokens.size()) {
    const bool guarded = i > 0 && is_abbreviation(tokens[i - 1].text) && tokens[i].text == ".";
    if (is_terminal(tokens[i].text) && !guarded && i > begin) {
      std::size_t end = i + 1;
      while (end < tokens.size() && (is_terminal(tokens[end].text) || is_closer(tokens[end].text))) ++end;
      sentences.push_back({begin, end});
      begin = end;
      i = end;
      continue;
    }
    ++i;
  }
  if (begin < tokens.size()) sentences.push_back({begin, tokens.size()});
  return sentences;
}

std::optional<std::uint64_t> phrase_to_value(std::span<const std::string> words, const VagueTable& vague) {
  auto atoms = lex(words, vague);
  if (!atoms) return std::nullopt;
  return NumberGrammar(*atoms).parse();
}

std::uint64_t phrase_to_value_or_throw(std::span<const std::string> words, const VagueTable& vague) {
  if (auto v = phrase_to_value(words, vague)) return *v;
  std::string joined;
  for (const auto& w : words) joined += (joined.empty() ? "" : " ") + w;
  throw ParseError("not a number phrase: \"" + joined + "\"");
}

std::vector<NumberPhrase> find_number_phrases(std::span<const Token> tokens, std::string_view text,
                                              const QuantityOptions& options) {
  std::vector<std::string> lowered(tokens.size());
  std::vector<bool> phrase_word(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    lowered[i] = to_lower(tokens[i].text);
    phrase_word[i] = may_be_in_phrase(lowered[i], options.vague);
  }

  auto crowd_adjacent = [&](std::size_t begin, std::size_t end) {
    const std::span<const std::string> words(options.crowd_words);
    return (begin > 0 && matches_stem(lowered[begin - 1], words)) ||
           (end < tokens.size() && matches_stem(lowered[end], words));
  };

  std::vector<NumberPhrase> phrases;
  std::size_t i = 0;
  while (i < tokens.size()) {
    if (!phrase_word[i]) {
      ++i;
      continue;
    }
    std::size_t run_end = i;
    while (run_end < tokens.size() && phrase_word[run_end] && run_end - i < options.max_phrase_tokens) ++run_end;

    bool found = false;
    for (std::size_t end = run_end; end > i; --end) {
      const std::span<const std::string> words(lowered.data() + i, end - i);
      auto value = phrase_to_value(words, options.vague);
      if (!value) continue;
      found = true;
      const bool year = end - i == 1 && is_year_like(tokens[i]) && !crowd_adjacent(i, end);
      if (!year) {
        const std::size_t start = tokens[i].start;
        phrases.push_back(NumberPhrase{{i, end}, *value, std::string(text.substr(start, tokens[end - 1].end - start))});
      }
      i = end;
      break;
    }
    if (!found) ++i;
  }
  return phrases;
}

MagnitudeLabel magnitude_bucket(std::int64_t value, const BucketTable& table) {
  if (value < 1) throw DomainError("magnitude_bucket requires value >= 1, got " + std::to_string(value));
  int label = 0;
  for (std::uint64_t threshold : table.thresholds) {
    if (static_cast<std::uint64_t>(value) >= threshold) ++label;
  }
  return MagnitudeLabel(label);
}

void validate(const BucketTable& table) {
  std::uint64_t prev = 1;
  for (std::uint64_t t : table.thresholds) {
    if (t <= prev) throw ConfigError("bucket thresholds must be strictly increasing and greater than 1");
    prev = t;
  }
}

void validate(const VagueTable& table) {
  if (table.multipliers.empty() || table.plurals.empty())
    throw ConfigError("vague-quantity tables must be nonempty");
  for (const auto& [word, value] : table.plurals) {
    if (word.size() < 2 || word.back() != 's' || !scale_base(std::string_view(word).substr(0, word.size() - 1)))
      throw ConfigError("plural quantity word \"" + word + "\" is not a plural scale word");
    if (value == 0) throw ConfigError("vague quantity \"" + word + "\" must be positive");
  }
  for (const auto& [word, value] : table.multipliers) {
    if (value == 0) throw ConfigError("vague quantity \"" + word + "\" must be positive");
    if (std::count(word.begin(), word.end(), ' ') > 1)
      throw ConfigError("multiplier \"" + word + "\" may span at most two words");
  }
}

}  // namespace crowdspan
