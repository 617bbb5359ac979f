#pragma once

// Free-group words, finite presentations and homomorphisms given on
// generators, together with the text format for presentations:
//
//   gens: a b c          # generator names, declared once
//   rel: b a b^-1 a^-2   # one relator per line; name, name^-1 or name^k
//
// Generator names only matter for I/O; internally a generator is its index.

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nilgenus/errors.hpp"

namespace nilgenus {

/// Signed generator index: +(k+1) is generator k, -(k+1) its inverse.
using Letter = std::int32_t;

constexpr Letter make_letter(std::size_t gen, int sign) noexcept {
  return sign > 0 ? static_cast<Letter>(gen + 1) : -static_cast<Letter>(gen + 1);
}
constexpr std::size_t generator_of(Letter l) noexcept {
  return static_cast<std::size_t>(l > 0 ? l - 1 : -l - 1);
}
constexpr int sign_of(Letter l) noexcept { return l > 0 ? 1 : -1; }

class Word {
 public:
  Word() = default;
  explicit Word(std::size_t alphabet_size) : alphabet_(alphabet_size) {}

  /// The freely reduced form of an arbitrary letter sequence.
  static Word reduce(std::span<const Letter> letters, std::size_t alphabet_size) {
    Word w(alphabet_size);
    w.letters_.reserve(letters.size());
    for (Letter l : letters) {
      if (l == 0 || generator_of(l) >= alphabet_size) {
        throw AlphabetError("letter " + std::to_string(l) +
                            " outside an alphabet of size " +
                            std::to_string(alphabet_size));
      }
      if (!w.letters_.empty() && w.letters_.back() == -l) {
        w.letters_.pop_back();
      } else {
        w.letters_.push_back(l);
      }
    }
    return w;
  }

  static Word generator(std::size_t gen, std::size_t alphabet_size, int sign = 1) {
    Letter l = make_letter(gen, sign);
    return reduce(std::span<const Letter>(&l, 1), alphabet_size);
  }

  std::size_t alphabet_size() const noexcept { return alphabet_; }
  std::span<const Letter> letters() const noexcept { return letters_; }
  std::size_t length() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word& a, const Word& b) {
    if (auto c = a.alphabet_ <=> b.alphabet_; c != 0) return c;
    return a.letters_ <=> b.letters_;
  }

 private:
  std::size_t alphabet_ = 0;
  std::vector<Letter> letters_;
};

inline Word free_reduce(std::span<const Letter> letters, std::size_t alphabet_size) {
  return Word::reduce(letters, alphabet_size);
}

namespace detail {
inline void require_same_alphabet(const Word& a, const Word& b) {
  if (a.alphabet_size() != b.alphabet_size()) {
    throw AlphabetError("words over alphabets of size " +
                        std::to_string(a.alphabet_size()) + " and " +
                        std::to_string(b.alphabet_size()));
  }
}
}  // namespace detail

inline Word multiply(const Word& a, const Word& b) {
  detail::require_same_alphabet(a, b);
  std::vector<Letter> all(a.letters().begin(), a.letters().end());
  all.insert(all.end(), b.letters().begin(), b.letters().end());
  return Word::reduce(all, a.alphabet_size());
}

inline Word invert(const Word& w) {
  std::vector<Letter> out;
  out.reserve(w.length());
  for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) out.push_back(-*it);
  return Word::reduce(out, w.alphabet_size());
}

/// [a,b] = a^-1 b^-1 a b.
inline Word commutator(const Word& a, const Word& b) {
  return multiply(multiply(invert(a), invert(b)), multiply(a, b));
}

inline Word power(const Word& w, long long k) {
  Word base = k < 0 ? invert(w) : w;
  Word out(w.alphabet_size());
  for (long long i = 0; i < (k < 0 ? -k : k); ++i) out = multiply(out, base);
  return out;
}

/// Removes conjugating prefixes: the result is a cyclic conjugate-free core.
inline Word cyclically_reduce(const Word& w) {
  auto l = w.letters();
  std::size_t i = 0, j = l.size();
  while (j - i >= 2 && l[i] == -l[j - 1]) {
    ++i;
    --j;
  }
  return Word::reduce(l.subspan(i, j - i), w.alphabet_size());
}

/// Exponent of each generator in w.
inline std::vector<long long> exponent_sums(const Word& w) {
  std::vector<long long> sums(w.alphabet_size(), 0);
  for (Letter l : w.letters()) sums[generator_of(l)] += sign_of(l);
  return sums;
}

/// Replaces every generator k by images[k].
inline Word substitute(const Word& w, std::span<const Word> images, std::size_t target_alphabet) {
  std::vector<Letter> out;
  for (Letter l : w.letters()) {
    const Word& im = images[generator_of(l)];
    if (im.alphabet_size() != target_alphabet) {
      throw AlphabetError("substitution image over the wrong alphabet");
    }
    if (l > 0) {
      out.insert(out.end(), im.letters().begin(), im.letters().end());
    } else {
      for (auto it = im.letters().rbegin(); it != im.letters().rend(); ++it) out.push_back(-*it);
    }
  }
  return Word::reduce(out, target_alphabet);
}

class Presentation {
 public:
  Presentation() = default;

  /// Validates names (unique, well formed) and relators (non-empty, reduced,
  /// over this alphabet).
  Presentation(std::vector<std::string> generator_names, std::vector<Word> relators)
      : names_(std::move(generator_names)), relators_(std::move(relators)) {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (!valid_name(names_[i])) throw InvalidArgument("invalid generator name '" + names_[i] + "'");
      for (std::size_t j = 0; j < i; ++j) {
        if (names_[i] == names_[j]) throw InvalidArgument("duplicate generator '" + names_[i] + "'");
      }
    }
    for (auto& r : relators_) {
      if (r.alphabet_size() != names_.size()) throw AlphabetError("relator over a different alphabet");
      r = Word::reduce(r.letters(), names_.size());
      if (r.empty()) throw InvalidArgument("empty relator");
    }
  }

  std::size_t generator_count() const noexcept { return names_.size(); }
  std::size_t relator_count() const noexcept { return relators_.size(); }
  const std::vector<std::string>& generator_names() const noexcept { return names_; }
  const std::vector<Word>& relators() const noexcept { return relators_; }
  const std::string& name(std::size_t gen) const { return names_.at(gen); }

  std::optional<std::size_t> index_of(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i] == name) return i;
    }
    return std::nullopt;
  }

  Word identity() const { return Word(names_.size()); }
  Word gen(std::size_t k, int sign = 1) const { return Word::generator(k, names_.size(), sign); }

  friend bool operator==(const Presentation&, const Presentation&) = default;

  static bool valid_name(std::string_view s) {
    if (s.empty()) return false;
    if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
    });
  }

 private:
  std::vector<std::string> names_;
  std::vector<Word> relators_;
};

// ---------------------------------------------------------------------------
// Text I/O

namespace detail {

struct Token {
  std::string text;
  std::size_t column;  // 1-based
};

inline std::vector<Token> split_tokens(std::string_view line, std::size_t first_column,
                                       std::string_view separators = " \t") {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && separators.find(line[i]) != std::string_view::npos) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && separators.find(line[j]) == std::string_view::npos) ++j;
    out.push_back({std::string(line.substr(i, j - i)), first_column + i});
    i = j;
  }
  return out;
}

/// "name", "name^-1" or "name^k" -> letters appended to out.
inline void parse_power_token(const Token& tok, const std::vector<std::string>& names,
                              std::size_t line, std::vector<Letter>& out) {
  std::string_view t = tok.text;
  long long k = 1;
  auto caret = t.find('^');
  std::string_view name = t.substr(0, caret);
  if (caret != std::string_view::npos) {
    std::string ex(t.substr(caret + 1));
    char* end = nullptr;
    errno = 0;
    k = std::strtoll(ex.c_str(), &end, 10);
    if (ex.empty() || *end != '\0' || errno != 0) {
      throw ParseError(line, tok.column + caret + 1, "bad exponent '" + ex + "'");
    }
    if (k == 0) throw ParseError(line, tok.column + caret + 1, "zero exponent");
    if (k > 100000 || k < -100000) throw ParseError(line, tok.column + caret + 1, "exponent too large");
  }
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) {
    throw ParseError(line, tok.column, "unknown generator '" + std::string(name) + "'");
  }
  Letter l = make_letter(static_cast<std::size_t>(it - names.begin()), k > 0 ? 1 : -1);
  for (long long i = 0; i < (k > 0 ? k : -k); ++i) out.push_back(l);
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace detail

inline Presentation parse_presentation(std::string_view text) {
  std::vector<std::string> names;
  std::vector<Word> relators;
  bool have_gens = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::size_t lead = 0;
    while (lead < line.size() && std::isspace(static_cast<unsigned char>(line[lead]))) ++lead;
    std::string_view body = line.substr(lead);
    if (detail::trim(body).empty()) continue;
    auto colon = body.find(':');
    std::string_view key = colon == std::string_view::npos ? body : detail::trim(body.substr(0, colon));
    if (colon == std::string_view::npos || (key != "gens" && key != "rel")) {
      throw ParseError(line_no, lead + 1, "expected 'gens:' or 'rel:'");
    }
    std::size_t rest_col = lead + colon + 2;
    auto tokens = detail::split_tokens(body.substr(colon + 1), rest_col);
    if (key == "gens") {
      if (have_gens) throw ParseError(line_no, lead + 1, "second 'gens:' line");
      have_gens = true;
      for (const auto& tok : tokens) {
        if (!Presentation::valid_name(tok.text)) {
          throw ParseError(line_no, tok.column, "invalid generator name '" + tok.text + "'");
        }
        if (std::find(names.begin(), names.end(), tok.text) != names.end()) {
          throw ParseError(line_no, tok.column, "duplicate generator '" + tok.text + "'");
        }
        names.push_back(tok.text);
      }
    } else {
      if (!have_gens) throw ParseError(line_no, lead + 1, "'rel:' before 'gens:'");
      if (tokens.empty()) throw ParseError(line_no, rest_col, "empty relator");
      std::vector<Letter> letters;
      for (const auto& tok : tokens) detail::parse_power_token(tok, names, line_no, letters);
      Word w = Word::reduce(letters, names.size());
      if (w.empty()) throw ParseError(line_no, rest_col, "relator reduces to the identity");
      relators.push_back(std::move(w));
    }
  }
  if (!have_gens) throw ParseError(line_no, 1, "missing 'gens:' line");
  return Presentation(std::move(names), std::move(relators));
}

/// Letters with runs compressed: "b a b^-1 a^-2". The empty word is "1".
inline std::string format_word(const Word& w, const std::vector<std::string>& names) {
  if (w.empty()) return "1";
  std::string out;
  auto l = w.letters();
  for (std::size_t i = 0; i < l.size();) {
    std::size_t j = i;
    while (j < l.size() && l[j] == l[i]) ++j;
    long long k = static_cast<long long>(j - i) * sign_of(l[i]);
    if (!out.empty()) out += ' ';
    out += names.at(generator_of(l[i]));
    if (k != 1) out += "^" + std::to_string(k);
    i = j;
  }
  return out;
}

inline std::string serialize(const Presentation& p) {
  std::string out = "gens:";
  for (const auto& n : p.generator_names()) out += " " + n;
  out += "\n";
  for (const auto& r : p.relators()) out += "rel: " + format_word(r, p.generator_names()) + "\n";
  return out;
}

/// A word typed by a user: letters separated by whitespace or '*', "1" for
/// the identity.
inline Word parse_word(std::string_view text, const Presentation& p) {
  auto tokens = detail::split_tokens(text, 1, " \t*");
  std::vector<Letter> letters;
  for (const auto& tok : tokens) {
    if (tok.text == "1") continue;
    detail::parse_power_token(tok, p.generator_names(), 1, letters);
  }
  return Word::reduce(letters, p.generator_count());
}

// ---------------------------------------------------------------------------
// Homomorphisms

/// A map between presented groups given by the images of the source
/// generators. check_hom (hom_check.hpp) certifies it.
struct GroupHom {
  Presentation source;
  Presentation target;
  std::vector<Word> images;
  /// Largest class at which every relator image was verified trivial in the
  /// target's nilpotent quotient; unset until certified.
  std::optional<int> certified_class;
  /// Relator images verified trivial by free reduction (free target).
  bool certified_exactly = false;

  GroupHom() = default;
  GroupHom(Presentation src, Presentation tgt, std::vector<Word> ims)
      : source(std::move(src)), target(std::move(tgt)), images(std::move(ims)) {
    if (images.size() != source.generator_count()) {
      throw InvalidArgument("hom needs one image per source generator (" +
                            std::to_string(source.generator_count()) + "), got " +
                            std::to_string(images.size()));
    }
    for (auto& im : images) {
      if (im.alphabet_size() != target.generator_count()) {
        throw AlphabetError("hom image not over the target alphabet");
      }
    }
  }

  Word apply(const Word& w) const {
    if (w.alphabet_size() != source.generator_count()) throw AlphabetError("word not over the hom source");
    return substitute(w, images, target.generator_count());
  }

  bool certified_at(int c) const {
    return certified_exactly || (certified_class && *certified_class >= c);
  }
};

inline GroupHom identity_hom(const Presentation& p) {
  std::vector<Word> ims;
  for (std::size_t k = 0; k < p.generator_count(); ++k) ims.push_back(p.gen(k));
  return GroupHom(p, p, std::move(ims));
}

/// "gen=word,gen=word". Generators not mentioned map to the target generator
/// of the same name.
inline GroupHom parse_hom_spec(std::string_view spec, const Presentation& source,
                               const Presentation& target) {
  std::vector<std::optional<Word>> ims(source.generator_count());
  auto parts = detail::split_tokens(spec, 1, ",");
  for (const auto& part : parts) {
    auto eq = part.text.find('=');
    if (eq == std::string::npos) throw InvalidArgument("hom assignment without '=': " + part.text);
    std::string lhs(detail::trim(std::string_view(part.text).substr(0, eq)));
    auto idx = source.index_of(lhs);
    if (!idx) throw InvalidArgument("hom assigns unknown source generator '" + lhs + "'");
    if (ims[*idx]) throw InvalidArgument("generator '" + lhs + "' assigned twice");
    ims[*idx] = parse_word(std::string_view(part.text).substr(eq + 1), target);
  }
  std::vector<Word> out;
  for (std::size_t k = 0; k < ims.size(); ++k) {
    if (ims[k]) {
      out.push_back(*ims[k]);
      continue;
    }
    auto t = target.index_of(source.name(k));
    if (!t) throw InvalidArgument("no image for '" + source.name(k) + "' and no same-named target generator");
    out.push_back(target.gen(*t));
  }
  return GroupHom(source, target, std::move(out));
}

inline GroupHom compose(const GroupHom& first, const GroupHom& second) {
  if (!(first.target == second.source)) throw InvalidArgument("composition of mismatched homs");
  std::vector<Word> ims;
  for (const auto& w : first.images) ims.push_back(second.apply(w));
  return GroupHom(first.source, second.target, std::move(ims));
}

}  // namespace nilgenus
