// Copyright 2026 The permrl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PERMRL_FORMULA_HPP_
#define PERMRL_FORMULA_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace permrl {

// Fixed-size bitset over atomic-proposition indices. Built once per state and
// reused for every formula evaluation touching that state.
class LabelBits {
 public:
  LabelBits() = default;
  LabelBits(int num_ap, const std::vector<int>& labels);

  bool test(int ap) const {
    const int w = ap >> 6;
    if (w < 0 || w >= static_cast<int>(words_.size())) return false;
    return (words_[w] >> (ap & 63)) & 1u;
  }

 private:
  std::vector<std::uint64_t> words_;
};

// Propositional assertion over atomic propositions, where each atom refers
// either to the current state's labels or (with a next-step marker) to the
// labels of the successor state. Assertions are the building blocks of
// safety objectives: a state constraint uses current atoms only, while an
// edge constraint may also use next-step atoms.
//
// Concrete syntax accepted by Parse:
//   expr    := or ('->' expr)?          (implication, right associative)
//   or      := and ('|' and)*
//   and     := unary ('&' unary)*
//   unary   := '!' unary | primary
//   primary := 'true' | 'false' | ident | 'X' ident | '(' expr ')'
// 'X ident' is a next-step proposition and is only accepted where next-step
// atoms are allowed.
class Assertion {
 public:
  enum class Op : std::uint8_t { kTrue, kFalse, kVar, kNot, kAnd, kOr, kImplies };

  struct Node {
    Op op;
    int var = -1;       // atomic-proposition index for kVar
    bool next = false;  // next-step atom for kVar
    int lhs = -1;
    int rhs = -1;
  };

  // Leaf constructors. `ap` is an index into the owning game's AP table.
  static Assertion make_true();
  static Assertion make_false();
  static Assertion var(int ap);
  static Assertion next_var(int ap);

  // Parses `text` against the proposition names in `ap`. Unknown identifiers
  // are a ParseError; so is a next-step atom when `allow_next` is false.
  static Assertion parse(const std::string& text, const std::vector<std::string>& ap,
                         bool allow_next);

  bool empty() const { return nodes_.empty(); }
  bool uses_next() const;

  // Largest atomic-proposition index mentioned, or -1 for a closed formula.
  int max_var() const;

  // Evaluates with `cur` as the current state's labels and `next` as the
  // successor's. A next-step atom reads from `next`.
  bool eval(const LabelBits& cur, const LabelBits& next) const;

  // Renders with minimal parentheses; Parse(to_string()) is the identity up
  // to node layout.
  std::string to_string(const std::vector<std::string>& ap) const;

  friend Assertion operator!(Assertion a);
  friend Assertion operator&&(Assertion a, Assertion b);
  friend Assertion operator||(Assertion a, Assertion b);
  static Assertion implies(Assertion a, Assertion b);

 private:
  // Appends `other`'s nodes to this pool and returns the shifted root index.
  int absorb(const Assertion& other);
  int add(Node n);

  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace permrl

#endif  // PERMRL_FORMULA_HPP_
