#include "corpus.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "wordorder/error.hpp"

namespace wordorder::cli {
namespace {

// Length of the UTF-8 sequence starting at text[i], or 0 when invalid.
std::size_t utf8_length(const std::string& text, std::size_t i) {
  const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(text[k]); };
  const unsigned char lead = byte(i);
  std::size_t n = 0;
  std::uint32_t cp = 0;
  if (lead < 0x80) return 1;
  if ((lead & 0xE0) == 0xC0) {
    n = 2;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    n = 3;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    n = 4;
    cp = lead & 0x07;
  } else {
    return 0;
  }
  if (i + n > text.size()) return 0;
  for (std::size_t k = 1; k < n; ++k) {
    if ((byte(i + k) & 0xC0) != 0x80) return 0;
    cp = (cp << 6) | (byte(i + k) & 0x3F);
  }
  // Overlong forms, surrogates and values past U+10FFFF.
  static constexpr std::uint32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
  if (cp < kMin[n] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return 0;
  return n;
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

}  // namespace

Corpus tokenize(const std::string& text, Tokenization mode) {
  Corpus corpus;
  std::size_t i = 0;
  std::string current;
  while (i < text.size()) {
    const std::size_t n = utf8_length(text, i);
    if (n == 0) {
      throw Error("io", "InputParseError", "invalid UTF-8 at byte " + std::to_string(i));
    }
    if (mode == Tokenization::character) {
      if (text[i] != '\n' && text[i] != '\r') corpus.tokens.push_back(text.substr(i, n));
    } else if (n == 1 && is_space(text[i])) {
      if (!current.empty()) corpus.tokens.push_back(std::move(current));
      current.clear();
    } else {
      current.append(text, i, n);
    }
    i += n;
  }
  if (!current.empty()) corpus.tokens.push_back(std::move(current));
  corpus.types = std::set<std::string>(corpus.tokens.begin(), corpus.tokens.end()).size();
  if (corpus.tokens.empty()) corpus.warnings.push_back("input contains no tokens");
  return corpus;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io", "ReadError", "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Corpus ingest_corpus(const std::string& path, Tokenization mode) {
  return tokenize(read_file(path), mode);
}

std::string render_tokens(const TokenSequence& tokens, Tokenization mode) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0 && mode == Tokenization::whitespace) out += ' ';
    out += tokens[i];
  }
  out += '\n';
  return out;
}

}  // namespace wordorder::cli
