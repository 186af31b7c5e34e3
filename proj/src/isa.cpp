// Copyright islab contributors.
// SPDX-License-Identifier: Apache-2.0

#include "islab/isa.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <set>

namespace islab {

namespace {

bool lower_alpha(char c) { return c >= 'a' && c <= 'z'; }
bool name_tail(char c) {
  return lower_alpha(c) || (c >= '0' && c <= '9') || c == '_';
}

} // namespace

bool valid_register_name(std::string_view name) {
  if (name.empty() || !lower_alpha(name.front())) return false;
  return std::all_of(name.begin() + 1, name.end(), name_tail);
}

const char *method_name(Method m) {
  switch (m) {
  case Method::Get: return "get";
  case Method::SetZero: return "set:0";
  case Method::SetOne: return "set:1";
  case Method::Negate: return "negate";
  }
  throw Error("unknown method");
}

static Instruction make_register_instruction(InstructionKind kind,
                                             std::string focus, Method m) {
  if (!valid_register_name(focus))
    throw Error("invalid register name '" + focus + "'");
  Instruction ins;
  ins.kind = kind;
  ins.focus = std::move(focus);
  ins.method = m;
  return ins;
}

Instruction Instruction::basic(std::string focus, Method m) {
  return make_register_instruction(InstructionKind::Basic, std::move(focus), m);
}
Instruction Instruction::pos_test(std::string focus, Method m) {
  return make_register_instruction(InstructionKind::PosTest, std::move(focus), m);
}
Instruction Instruction::neg_test(std::string focus, Method m) {
  return make_register_instruction(InstructionKind::NegTest, std::move(focus), m);
}
Instruction Instruction::fwd_jump(std::uint64_t offset) {
  Instruction ins;
  ins.kind = InstructionKind::FwdJump;
  ins.offset = offset;
  return ins;
}
Instruction Instruction::bwd_jump(std::uint64_t offset) {
  Instruction ins;
  ins.kind = InstructionKind::BwdJump;
  ins.offset = offset;
  return ins;
}
Instruction Instruction::halt() { return Instruction{}; }

std::string render_instruction(const Instruction &ins) {
  switch (ins.kind) {
  case InstructionKind::Basic:
    return ins.focus + "." + method_name(ins.method);
  case InstructionKind::PosTest:
    return "+" + ins.focus + "." + method_name(ins.method);
  case InstructionKind::NegTest:
    return "-" + ins.focus + "." + method_name(ins.method);
  case InstructionKind::FwdJump:
    return "#" + std::to_string(ins.offset);
  case InstructionKind::BwdJump:
    return "\\#" + std::to_string(ins.offset);
  case InstructionKind::Halt:
    return "!";
  }
  throw Error("unknown instruction kind");
}

InstructionSequence::InstructionSequence(std::vector<Instruction> instructions)
    : instructions_(std::move(instructions)) {
  if (instructions_.empty())
    throw Error("instruction sequence must be non-empty");
}

const Instruction &InstructionSequence::at(std::size_t position) const {
  if (position < 1 || position > instructions_.size())
    throw Error("position " + std::to_string(position) + " outside 1.." +
                std::to_string(instructions_.size()));
  return instructions_[position - 1];
}

std::vector<std::string> InstructionSequence::registers() const {
  std::set<std::string> names;
  for (const Instruction &ins : instructions_)
    if (ins.uses_register()) names.insert(ins.focus);
  return {names.begin(), names.end()};
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct RawToken {
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

// Splits the text at ';' and newlines, strips '%' comments and surrounding
// whitespace, and records the source position of each token's first char.
std::vector<RawToken> scan_tokens(std::string_view text) {
  std::vector<RawToken> tokens;
  RawToken cur;
  bool in_token = false;
  bool in_comment = false;
  std::size_t line = 1, column = 1;

  auto finish = [&] {
    if (in_token) {
      while (!cur.text.empty() && std::isspace(static_cast<unsigned char>(cur.text.back())))
        cur.text.pop_back();
      if (!cur.text.empty()) tokens.push_back(cur);
      cur = RawToken{};
      in_token = false;
    }
  };

  for (char c : text) {
    if (c == '\n') {
      in_comment = false;
      finish();
      ++line;
      column = 1;
      continue;
    }
    if (!in_comment) {
      if (c == '%') {
        in_comment = true;
        finish();
      } else if (c == ';') {
        finish();
      } else if (std::isspace(static_cast<unsigned char>(c)) && !in_token) {
        // leading whitespace, skip
      } else {
        if (!in_token) {
          in_token = true;
          cur.line = line;
          cur.column = column;
        }
        cur.text.push_back(c);
      }
    }
    ++column;
  }
  finish();
  return tokens;
}

std::uint64_t parse_offset(std::string_view digits, const RawToken &tok) {
  if (digits.empty())
    throw ParseError("jump offset expected after '#'", tok.line, tok.column);
  if (digits.front() == '-')
    throw ParseError("negative jump offset", tok.line, tok.column);
  std::uint64_t value = 0;
  for (char c : digits) {
    if (c < '0' || c > '9')
      throw ParseError("malformed jump offset '" + std::string(digits) + "'",
                       tok.line, tok.column);
    std::uint64_t digit = static_cast<std::uint64_t>(c - '0');
    if (value > (std::numeric_limits<std::uint64_t>::max() - digit) / 10)
      throw ParseError("jump offset out of range", tok.line, tok.column);
    value = value * 10 + digit;
  }
  return value;
}

Method parse_method(std::string_view text, const RawToken &tok) {
  if (text == "get") return Method::Get;
  if (text == "set:0") return Method::SetZero;
  if (text == "set:1") return Method::SetOne;
  if (text == "negate") return Method::Negate;
  throw ParseError("unknown method '" + std::string(text) +
                       "' (expected get, set:0, set:1 or negate)",
                   tok.line, tok.column);
}

Instruction parse_token(const RawToken &tok) {
  const std::string &t = tok.text;
  for (char c : t)
    if (std::isspace(static_cast<unsigned char>(c)))
      throw ParseError("unexpected whitespace inside instruction '" + t + "'",
                       tok.line, tok.column);

  if (t == "!") return Instruction::halt();
  if (t[0] == '#') return Instruction::fwd_jump(parse_offset(t.substr(1), tok));
  if (t[0] == '\\') {
    if (t.size() < 2 || t[1] != '#')
      throw ParseError("malformed instruction '" + t + "'", tok.line, tok.column);
    return Instruction::bwd_jump(parse_offset(t.substr(2), tok));
  }

  InstructionKind kind = InstructionKind::Basic;
  std::string_view body = t;
  if (t[0] == '+') {
    kind = InstructionKind::PosTest;
    body = std::string_view(t).substr(1);
  } else if (t[0] == '-') {
    kind = InstructionKind::NegTest;
    body = std::string_view(t).substr(1);
  }

  std::size_t dot = body.find('.');
  if (dot == std::string_view::npos)
    throw ParseError("malformed instruction '" + t +
                         "' (expected focus.method, #N, \\#N or !)",
                     tok.line, tok.column);
  std::string focus(body.substr(0, dot));
  if (!valid_register_name(focus))
    throw ParseError("invalid register name '" + focus + "'", tok.line,
                     tok.column);
  Method method = parse_method(body.substr(dot + 1), tok);
  switch (kind) {
  case InstructionKind::PosTest: return Instruction::pos_test(focus, method);
  case InstructionKind::NegTest: return Instruction::neg_test(focus, method);
  default: return Instruction::basic(focus, method);
  }
}

} // namespace

InstructionSequence parse_sequence(std::string_view text) {
  std::vector<RawToken> tokens = scan_tokens(text);
  if (tokens.empty())
    throw ParseError("empty program", 1, 1);
  std::vector<Instruction> instructions;
  instructions.reserve(tokens.size());
  for (const RawToken &tok : tokens) instructions.push_back(parse_token(tok));
  return InstructionSequence(std::move(instructions));
}

std::string render_sequence(const InstructionSequence &x) {
  std::string out;
  for (std::size_t i = 0; i < x.length(); ++i) {
    if (i > 0) out += "; ";
    out += render_instruction(x.instructions()[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fragments and substitution

Fragment::Fragment(std::vector<IndexRange> parts) : parts_(std::move(parts)) {
  if (parts_.empty()) throw Error("fragment must have at least one part");
  std::size_t prev_hi = 0;
  for (const IndexRange &r : parts_) {
    if (r.lo < 1) throw Error("fragment positions are 1-based");
    if (r.hi < r.lo)
      throw Error("fragment range " + std::to_string(r.lo) + "-" +
                  std::to_string(r.hi) + " is empty");
    if (r.lo <= prev_hi)
      throw Error("fragment parts must be disjoint and sorted ascending");
    prev_hi = r.hi;
  }
}

std::size_t Fragment::total_length() const {
  std::size_t total = 0;
  for (const IndexRange &r : parts_) total += r.length();
  return total;
}

bool Fragment::contains(std::size_t position) const {
  for (const IndexRange &r : parts_)
    if (position >= r.lo && position <= r.hi) return true;
  return false;
}

void Fragment::validate_for(const InstructionSequence &x) const {
  if (parts_.back().hi > x.length())
    throw Error("fragment range " + std::to_string(parts_.back().lo) + "-" +
                std::to_string(parts_.back().hi) + " exceeds sequence length " +
                std::to_string(x.length()));
}

std::size_t Replacement::total_length() const {
  std::size_t total = 0;
  for (const auto &part : parts) total += part.size();
  return total;
}

InstructionSequence substitute(const InstructionSequence &x, const Fragment &f,
                               const Replacement &r) {
  f.validate_for(x);
  if (r.arity() != f.arity())
    throw Error("replacement arity " + std::to_string(r.arity()) +
                " does not match fragment arity " + std::to_string(f.arity()));

  std::vector<Instruction> out;
  std::size_t part = 0;
  std::size_t p = 1;
  while (p <= x.length()) {
    if (part < f.arity() && p == f.parts()[part].lo) {
      const auto &repl = r.parts[part];
      out.insert(out.end(), repl.begin(), repl.end());
      p = f.parts()[part].hi + 1;
      ++part;
    } else {
      out.push_back(x.at(p));
      ++p;
    }
  }
  if (out.empty())
    throw Error("substitution would delete every instruction");
  return InstructionSequence(std::move(out));
}

Replacement extract(const InstructionSequence &x, const Fragment &f) {
  f.validate_for(x);
  Replacement r;
  for (const IndexRange &range : f.parts()) {
    std::vector<Instruction> part;
    for (std::size_t p = range.lo; p <= range.hi; ++p) part.push_back(x.at(p));
    r.parts.push_back(std::move(part));
  }
  return r;
}

std::vector<Fragment> enumerate_fragments(const InstructionSequence &x,
                                          std::size_t max_total_len,
                                          std::size_t max_parts) {
  if (max_total_len < 1) throw Error("max_total_len must be >= 1");
  if (max_parts < 1) throw Error("max_parts must be >= 1");

  std::vector<Fragment> out;
  std::vector<IndexRange> current;
  const std::size_t len = x.length();

  auto rec = [&](auto &&self, std::size_t min_lo, std::size_t budget,
                 std::size_t parts_left) -> void {
    for (std::size_t lo = min_lo; lo <= len; ++lo) {
      std::size_t max_hi = std::min(len, lo + budget - 1);
      for (std::size_t hi = lo; hi <= max_hi; ++hi) {
        current.push_back({lo, hi});
        out.emplace_back(current);
        std::size_t used = hi - lo + 1;
        if (parts_left > 1 && budget > used && hi + 1 <= len)
          self(self, hi + 1, budget - used, parts_left - 1);
        current.pop_back();
      }
    }
  };
  rec(rec, 1, max_total_len, max_parts);
  return out;
}

// ---------------------------------------------------------------------------
// Fragment / replacement text

namespace {

std::size_t parse_index(std::string_view text) {
  if (text.empty()) throw Error("empty index in fragment text");
  std::size_t value = 0;
  for (char c : text) {
    if (c < '0' || c > '9')
      throw Error("malformed fragment index '" + std::string(text) + "'");
    value = value * 10 + static_cast<std::size_t>(c - '0');
    if (value > (std::size_t(1) << 40))
      throw Error("fragment index out of range");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

} // namespace

Fragment parse_fragment(std::string_view text) {
  std::vector<IndexRange> ranges;
  for (std::string_view piece : split(text, ',')) {
    piece = trim(piece);
    std::size_t dash = piece.find('-');
    IndexRange r;
    if (dash == std::string_view::npos) {
      r.lo = r.hi = parse_index(piece);
    } else {
      r.lo = parse_index(trim(piece.substr(0, dash)));
      r.hi = parse_index(trim(piece.substr(dash + 1)));
    }
    ranges.push_back(r);
  }
  return Fragment(std::move(ranges));
}

std::string render_fragment(const Fragment &f) {
  std::string out;
  for (std::size_t i = 0; i < f.arity(); ++i) {
    if (i > 0) out += ",";
    const IndexRange &r = f.parts()[i];
    out += std::to_string(r.lo);
    if (r.hi != r.lo) out += "-" + std::to_string(r.hi);
  }
  return out;
}

Replacement parse_replacement(std::string_view text, std::size_t arity) {
  Replacement r;
  for (std::string_view piece : split(text, '|')) {
    piece = trim(piece);
    std::vector<Instruction> part;
    if (!piece.empty()) {
      InstructionSequence seq = parse_sequence(piece);
      part = seq.instructions();
    }
    r.parts.push_back(std::move(part));
  }
  if (r.arity() != arity)
    throw Error("replacement has " + std::to_string(r.arity()) +
                " part(s), fragment expects " + std::to_string(arity));
  return r;
}

std::string render_replacement(const Replacement &r) {
  std::string out;
  for (std::size_t i = 0; i < r.parts.size(); ++i) {
    if (i > 0) out += " | ";
    for (std::size_t j = 0; j < r.parts[i].size(); ++j) {
      if (j > 0) out += "; ";
      out += render_instruction(r.parts[i][j]);
    }
  }
  return out;
}

} // namespace islab
