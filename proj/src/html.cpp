#include "crowdspan/html.hpp"

#include <array>
#include <cctype>
#include <cstdint>
#include <unordered_map>
#include <unordered_set>

#include "crowdspan/quantity.hpp"

namespace crowdspan {

namespace {

const std::unordered_set<std::string> kBlockTags = {
    "p",      "div",     "br",     "h1",     "h2",       "h3",         "h4",     "h5",     "h6",
    "li",     "ul",      "ol",     "tr",     "table",    "section",    "article", "header", "footer",
    "blockquote", "pre", "hr",     "title",  "figcaption", "dd",       "dt",     "main",   "aside", "nav"};

const std::unordered_set<std::string> kSkipContentTags = {"script", "style", "noscript", "template"};

const std::unordered_map<std::string_view, std::string_view> kNamedEntities = {
    {"amp", "&"},       {"lt", "<"},        {"gt", ">"},        {"quot", "\""},    {"apos", "'"},
    {"nbsp", " "},      {"mdash", "—"},     {"ndash", "–"},     {"hellip", "…"},   {"lsquo", "‘"},
    {"rsquo", "’"},     {"ldquo", "“"},     {"rdquo", "”"},     {"copy", "©"},     {"reg", "®"},
    {"laquo", "«"},     {"raquo", "»"},     {"middot", "·"},    {"eacute", "é"},   {"egrave", "è"},
    {"aacute", "á"},    {"oacute", "ó"},    {"iacute", "í"},    {"uacute", "ú"},   {"ntilde", "ñ"},
    {"ccedil", "ç"},    {"uuml", "ü"},      {"ouml", "ö"},      {"auml", "ä"}};

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

// Replaces malformed sequences with U+FFFD.
std::string sanitize_utf8(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  std::size_t i = 0;
  while (i < in.size()) {
    const auto c = static_cast<unsigned char>(in[i]);
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      out += static_cast<char>(c);
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    }
    bool ok = len > 0 && i + len <= in.size();
    for (std::size_t k = 1; ok && k < len; ++k) {
      const auto cc = static_cast<unsigned char>(in[i + k]);
      ok = (cc & 0xC0) == 0x80;
      cp = (cp << 6) | (cc & 0x3F);
    }
    static constexpr std::array<std::uint32_t, 5> kMin = {0, 0, 0x80, 0x800, 0x10000};
    if (ok && (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))) ok = false;
    if (ok) {
      out.append(in.substr(i, len));
      i += len;
    } else {
      append_utf8(out, 0xFFFD);
      ++i;
    }
  }
  return out;
}

// Returns the tag name (lowercase) and whether it is a closing tag.
std::pair<std::string, bool> tag_name(std::string_view tag) {
  std::size_t i = 0;
  bool closing = false;
  if (i < tag.size() && tag[i] == '/') {
    closing = true;
    ++i;
  }
  std::size_t j = i;
  while (j < tag.size() && (std::isalnum(static_cast<unsigned char>(tag[j])) || tag[j] == '-')) ++j;
  return {to_lower(tag.substr(i, j - i)), closing};
}

// Collapses whitespace: spaces within a line become one space, lines are
// trimmed, and empty lines are dropped.
std::string collapse(std::string_view raw) {
  std::string out;
  std::string line;
  bool pending_space = false;
  auto flush_line = [&] {
    if (!line.empty()) {
      if (!out.empty()) out += '\n';
      out += line;
    }
    line.clear();
    pending_space = false;
  };
  for (char c : raw) {
    if (c == '\n') {
      flush_line();
    } else if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
      pending_space = !line.empty();
    } else {
      if (pending_space) line += ' ';
      pending_space = false;
      line += c;
    }
  }
  flush_line();
  return out;
}

}  // namespace

std::string decode_entities(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '&') {
      out += text[i++];
      continue;
    }
    const std::size_t semi = text.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 12) {
      out += text[i++];
      continue;
    }
    const std::string_view name = text.substr(i + 1, semi - i - 1);
    if (name.size() > 1 && name[0] == '#') {
      std::uint32_t cp = 0;
      bool ok = true;
      const bool hex = name[1] == 'x' || name[1] == 'X';
      const std::string_view digits = name.substr(hex ? 2 : 1);
      ok = !digits.empty();
      for (char c : digits) {
        int d = -1;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (hex && c >= 'a' && c <= 'f') d = c - 'a' + 10;
        else if (hex && c >= 'A' && c <= 'F') d = c - 'A' + 10;
        if (d < 0 || cp > 0x10FFFF) {
          ok = false;
          break;
        }
        cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(d);
      }
      if (ok) {
        if (cp == 0xA0) cp = ' ';
        append_utf8(out, cp);
        i = semi + 1;
        continue;
      }
    } else if (auto it = kNamedEntities.find(name); it != kNamedEntities.end()) {
      out += it->second;
      i = semi + 1;
      continue;
    }
    out += text[i++];
  }
  return out;
}

std::string ingest_html(std::string_view html) {
  const std::string clean = sanitize_utf8(html);
  const std::string_view src = clean;
  std::string raw;
  std::string text_run;
  auto flush_text = [&] {
    // Source line breaks are ordinary whitespace; only block tags break lines.
    for (char& c : text_run) {
      if (c == '\n') c = ' ';
    }
    raw += decode_entities(text_run);
    text_run.clear();
  };

  std::size_t i = 0;
  while (i < src.size()) {
    if (src[i] != '<') {
      text_run += src[i++];
      continue;
    }
    if (src.substr(i, 4) == "<!--") {
      const std::size_t close = src.find("-->", i + 4);
      i = close == std::string_view::npos ? src.size() : close + 3;
      continue;
    }
    const std::size_t close = src.find('>', i + 1);
    if (close == std::string_view::npos) {
      text_run += src.substr(i);
      break;
    }
    const std::string_view inside = src.substr(i + 1, close - i - 1);
    // A '<' that does not start a tag ("a < b") stays text.
    if (inside.empty() || !(std::isalpha(static_cast<unsigned char>(inside[0])) || inside[0] == '/' ||
                            inside[0] == '!' || inside[0] == '?')) {
      text_run += src[i++];
      continue;
    }
    flush_text();
    const auto [name, closing] = tag_name(inside);
    i = close + 1;
    if (!closing && kSkipContentTags.contains(name)) {
      const std::string end_tag = "</" + name;
      std::size_t pos = i;
      while (true) {
        pos = src.find("</", pos);
        if (pos == std::string_view::npos) {
          i = src.size();
          break;
        }
        if (to_lower(src.substr(pos, end_tag.size())) == end_tag) {
          const std::size_t gt = src.find('>', pos);
          i = gt == std::string_view::npos ? src.size() : gt + 1;
          break;
        }
        pos += 2;
      }
      continue;
    }
    if (kBlockTags.contains(name)) raw += '\n';
  }
  flush_text();
  return collapse(raw);
}

}  // namespace crowdspan
