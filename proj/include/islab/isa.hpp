// Copyright islab contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Instruction-sequence syntax: parsing, rendering, fragment extraction and
// substitution. A program is a finite, non-empty, 1-indexed list of primitive
// instructions over single-bit registers:
//
//   f.m     basic instruction: apply method m to register f, ignore the reply
//   +f.m    positive test: on reply false, skip the next position
//   -f.m    negative test: on reply true, skip the next position
//   #k      forward jump by k positions (#1 = next instruction)
//   \#k     backward jump by k positions
//   !       termination
//
// Methods are get, set:0, set:1 and negate. Text form: instructions separated
// by ';' and/or newlines, '%' starts a comment to end of line.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "islab/error.hpp"

namespace islab {

enum class Method { Get, SetZero, SetOne, Negate };

enum class InstructionKind { Basic, PosTest, NegTest, FwdJump, BwdJump, Halt };

const char *method_name(Method m);

struct Instruction {
  InstructionKind kind = InstructionKind::Halt;
  std::string focus;            // Basic / PosTest / NegTest
  Method method = Method::Get;  // Basic / PosTest / NegTest
  std::uint64_t offset = 0;     // FwdJump / BwdJump

  static Instruction basic(std::string focus, Method m);
  static Instruction pos_test(std::string focus, Method m);
  static Instruction neg_test(std::string focus, Method m);
  static Instruction fwd_jump(std::uint64_t offset);
  static Instruction bwd_jump(std::uint64_t offset);
  static Instruction halt();

  bool is_jump() const {
    return kind == InstructionKind::FwdJump || kind == InstructionKind::BwdJump;
  }
  bool uses_register() const {
    return kind == InstructionKind::Basic || kind == InstructionKind::PosTest ||
           kind == InstructionKind::NegTest;
  }

  bool operator==(const Instruction &) const = default;
};

/// True iff `name` is a well-formed register name: [a-z][a-z0-9_]*.
bool valid_register_name(std::string_view name);

std::string render_instruction(const Instruction &ins);

/// A non-empty instruction list addressed by 1-based positions.
class InstructionSequence {
public:
  explicit InstructionSequence(std::vector<Instruction> instructions);

  std::size_t length() const { return instructions_.size(); }
  const Instruction &at(std::size_t position) const;  // 1-based
  const std::vector<Instruction> &instructions() const { return instructions_; }

  /// Sorted set of register names appearing in the sequence.
  std::vector<std::string> registers() const;

  bool operator==(const InstructionSequence &) const = default;

private:
  std::vector<Instruction> instructions_;
};

struct IndexRange {
  std::size_t lo = 0;  // 1-based, inclusive
  std::size_t hi = 0;

  std::size_t length() const { return hi - lo + 1; }
  bool operator==(const IndexRange &) const = default;
};

/// An n-located candidate fault: disjoint (possibly adjacent) index ranges of
/// a host sequence, sorted ascending. Its length is the sum of part lengths.
class Fragment {
public:
  explicit Fragment(std::vector<IndexRange> parts);

  std::size_t arity() const { return parts_.size(); }
  std::size_t total_length() const;
  const std::vector<IndexRange> &parts() const { return parts_; }
  bool contains(std::size_t position) const;

  /// Every index must fall within 1..len of the host sequence.
  void validate_for(const InstructionSequence &x) const;

  bool operator==(const Fragment &) const = default;

private:
  std::vector<IndexRange> parts_;
};

/// A candidate repair: one instruction list per fragment part. Parts may be
/// empty (pure deletion).
struct Replacement {
  std::vector<std::vector<Instruction>> parts;

  std::size_t arity() const { return parts.size(); }
  std::size_t total_length() const;
  bool operator==(const Replacement &) const = default;
};

InstructionSequence parse_sequence(std::string_view text);
std::string render_sequence(const InstructionSequence &x);

/// Splices each fragment part out of x and the corresponding replacement part
/// in, left to right. Instructions outside the fragment are preserved in
/// order. Throws on arity mismatch, out-of-bounds fragments, and when the
/// result would be empty.
InstructionSequence substitute(const InstructionSequence &x, const Fragment &f,
                               const Replacement &r);

/// The identity replacement: substitute(x, f, extract(x, f)) == x.
Replacement extract(const InstructionSequence &x, const Fragment &f);

/// Every fragment of x with at most `max_parts` parts and total length at
/// most `max_total_len`, exactly once, ordered lexicographically on the
/// flattened part boundaries (lo1, hi1, lo2, hi2, ...).
std::vector<Fragment> enumerate_fragments(const InstructionSequence &x,
                                          std::size_t max_total_len,
                                          std::size_t max_parts);

/// Fragment text: "lo-hi(,lo-hi)*"; a bare index "n" means "n-n".
Fragment parse_fragment(std::string_view text);
std::string render_fragment(const Fragment &f);

/// Replacement text: fragment parts separated by '|', instructions within a
/// part separated by ';'. An empty part (deletion) is written as "".
Replacement parse_replacement(std::string_view text, std::size_t arity);
std::string render_replacement(const Replacement &r);

} // namespace islab
