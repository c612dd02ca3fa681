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

#include "permrl/formula.hpp"

#include <cctype>
#include <unordered_map>

#include "permrl/errors.hpp"

namespace permrl {

LabelBits::LabelBits(int num_ap, const std::vector<int>& labels) {
  words_.assign((num_ap + 63) / 64, 0);
  for (int ap : labels) {
    if (ap < 0 || ap >= num_ap) throw ModelError("label index out of range: " + std::to_string(ap));
    words_[ap >> 6] |= std::uint64_t{1} << (ap & 63);
  }
}

int Assertion::add(Node n) {
  nodes_.push_back(n);
  return static_cast<int>(nodes_.size()) - 1;
}

int Assertion::absorb(const Assertion& other) {
  const int offset = static_cast<int>(nodes_.size());
  for (Node n : other.nodes_) {
    if (n.lhs >= 0) n.lhs += offset;
    if (n.rhs >= 0) n.rhs += offset;
    nodes_.push_back(n);
  }
  return other.root_ + offset;
}

Assertion Assertion::make_true() {
  Assertion a;
  a.root_ = a.add({Op::kTrue});
  return a;
}

Assertion Assertion::make_false() {
  Assertion a;
  a.root_ = a.add({Op::kFalse});
  return a;
}

Assertion Assertion::var(int ap) {
  Assertion a;
  a.root_ = a.add({Op::kVar, ap, false, -1, -1});
  return a;
}

Assertion Assertion::next_var(int ap) {
  Assertion a;
  a.root_ = a.add({Op::kVar, ap, true, -1, -1});
  return a;
}

Assertion operator!(Assertion a) {
  const int child = a.root_;
  a.root_ = a.add({Assertion::Op::kNot, -1, false, child, -1});
  return a;
}

Assertion operator&&(Assertion a, Assertion b) {
  const int lhs = a.root_;
  const int rhs = a.absorb(b);
  a.root_ = a.add({Assertion::Op::kAnd, -1, false, lhs, rhs});
  return a;
}

Assertion operator||(Assertion a, Assertion b) {
  const int lhs = a.root_;
  const int rhs = a.absorb(b);
  a.root_ = a.add({Assertion::Op::kOr, -1, false, lhs, rhs});
  return a;
}

Assertion Assertion::implies(Assertion a, Assertion b) {
  const int lhs = a.root_;
  const int rhs = a.absorb(b);
  a.root_ = a.add({Op::kImplies, -1, false, lhs, rhs});
  return a;
}

bool Assertion::uses_next() const {
  for (const Node& n : nodes_) {
    if (n.op == Op::kVar && n.next) return true;
  }
  return false;
}

int Assertion::max_var() const {
  int m = -1;
  for (const Node& n : nodes_) {
    if (n.op == Op::kVar && n.var > m) m = n.var;
  }
  return m;
}

bool Assertion::eval(const LabelBits& cur, const LabelBits& next) const {
  if (root_ < 0) throw ModelError("evaluating an empty assertion");
  // Recursion over the node pool; formulas stay small enough for the stack.
  struct Eval {
    const std::vector<Node>& nodes;
    const LabelBits& cur;
    const LabelBits& next;
    bool run(int i) const {
      const Node& n = nodes[i];
      switch (n.op) {
        case Op::kTrue: return true;
        case Op::kFalse: return false;
        case Op::kVar: return n.next ? next.test(n.var) : cur.test(n.var);
        case Op::kNot: return !run(n.lhs);
        case Op::kAnd: return run(n.lhs) && run(n.rhs);
        case Op::kOr: return run(n.lhs) || run(n.rhs);
        case Op::kImplies: return !run(n.lhs) || run(n.rhs);
      }
      return false;
    }
  };
  return Eval{nodes_, cur, next}.run(root_);
}

namespace {

struct Token {
  enum class Kind { kIdent, kTrue, kFalse, kNext, kNot, kAnd, kOr, kImplies, kLParen, kRParen, kEnd };
  Kind kind;
  std::string text;
  int pos;
};

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  int i = 0;
  const int n = static_cast<int>(text.size());
  while (i < n) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '(') {
      out.push_back({Token::Kind::kLParen, "(", i++});
    } else if (c == ')') {
      out.push_back({Token::Kind::kRParen, ")", i++});
    } else if (c == '!') {
      out.push_back({Token::Kind::kNot, "!", i++});
    } else if (c == '&') {
      out.push_back({Token::Kind::kAnd, "&", i++});
    } else if (c == '|') {
      out.push_back({Token::Kind::kOr, "|", i++});
    } else if (c == '-') {
      if (i + 1 >= n || text[i + 1] != '>') {
        throw ParseError("expected '->' at position " + std::to_string(i));
      }
      out.push_back({Token::Kind::kImplies, "->", i});
      i += 2;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const int start = i;
      while (i < n && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) ++i;
      const std::string word = text.substr(start, i - start);
      if (word == "true") {
        out.push_back({Token::Kind::kTrue, word, start});
      } else if (word == "false") {
        out.push_back({Token::Kind::kFalse, word, start});
      } else if (word == "X") {
        out.push_back({Token::Kind::kNext, word, start});
      } else {
        out.push_back({Token::Kind::kIdent, word, start});
      }
    } else {
      throw ParseError(std::string("unexpected character '") + c + "' at position " +
                       std::to_string(i));
    }
  }
  out.push_back({Token::Kind::kEnd, "", n});
  return out;
}

class Parser {
 public:
  Parser(const std::string& text, const std::vector<std::string>& ap, bool allow_next)
      : tokens_(tokenize(text)), allow_next_(allow_next) {
    for (int i = 0; i < static_cast<int>(ap.size()); ++i) index_[ap[i]] = i;
  }

  Assertion parse() {
    Assertion a = parse_implies();
    expect(Token::Kind::kEnd, "end of formula");
    return a;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  Token take() { return tokens_[pos_++]; }

  void expect(Token::Kind kind, const std::string& what) {
    if (peek().kind != kind) {
      throw ParseError("expected " + what + " at position " + std::to_string(peek().pos));
    }
    ++pos_;
  }

  int lookup(const Token& t) {
    auto it = index_.find(t.text);
    if (it == index_.end()) {
      throw ParseError("unknown proposition '" + t.text + "' at position " +
                       std::to_string(t.pos));
    }
    return it->second;
  }

  Assertion parse_implies() {
    Assertion lhs = parse_or();
    if (peek().kind == Token::Kind::kImplies) {
      take();
      return Assertion::implies(std::move(lhs), parse_implies());
    }
    return lhs;
  }

  Assertion parse_or() {
    Assertion a = parse_and();
    while (peek().kind == Token::Kind::kOr) {
      take();
      a = std::move(a) || parse_and();
    }
    return a;
  }

  Assertion parse_and() {
    Assertion a = parse_unary();
    while (peek().kind == Token::Kind::kAnd) {
      take();
      a = std::move(a) && parse_unary();
    }
    return a;
  }

  Assertion parse_unary() {
    if (peek().kind == Token::Kind::kNot) {
      take();
      return !parse_unary();
    }
    return parse_primary();
  }

  Assertion parse_primary() {
    const Token t = take();
    switch (t.kind) {
      case Token::Kind::kTrue:
        return Assertion::make_true();
      case Token::Kind::kFalse:
        return Assertion::make_false();
      case Token::Kind::kIdent:
        return Assertion::var(lookup(t));
      case Token::Kind::kNext: {
        if (!allow_next_) {
          throw ParseError("next-step proposition not allowed here (position " +
                           std::to_string(t.pos) + ")");
        }
        const Token name = take();
        if (name.kind != Token::Kind::kIdent) {
          throw ParseError("expected proposition after 'X' at position " +
                           std::to_string(name.pos));
        }
        return Assertion::next_var(lookup(name));
      }
      case Token::Kind::kLParen: {
        Assertion a = parse_implies();
        expect(Token::Kind::kRParen, "')'");
        return a;
      }
      default:
        throw ParseError("unexpected token at position " + std::to_string(t.pos));
    }
  }

  std::vector<Token> tokens_;
  bool allow_next_;
  int pos_ = 0;
  std::unordered_map<std::string, int> index_;
};

}  // namespace

Assertion Assertion::parse(const std::string& text, const std::vector<std::string>& ap,
                           bool allow_next) {
  return Parser(text, ap, allow_next).parse();
}

namespace {

// Precedence for printing: higher binds tighter.
int precedence(Assertion::Op op) {
  switch (op) {
    case Assertion::Op::kImplies: return 1;
    case Assertion::Op::kOr: return 2;
    case Assertion::Op::kAnd: return 3;
    case Assertion::Op::kNot: return 4;
    default: return 5;
  }
}

}  // namespace

std::string Assertion::to_string(const std::vector<std::string>& ap) const {
  if (root_ < 0) return "";
  struct Printer {
    const std::vector<Node>& nodes;
    const std::vector<std::string>& ap;

    std::string name(int var) const {
      if (var >= 0 && var < static_cast<int>(ap.size())) return ap[var];
      return "p" + std::to_string(var);
    }

    // `min_prec`: the loosest operator printable here without parentheses.
    std::string run(int i, int min_prec) const {
      const Node& n = nodes[i];
      const int prec = precedence(n.op);
      std::string body;
      switch (n.op) {
        case Op::kTrue: body = "true"; break;
        case Op::kFalse: body = "false"; break;
        case Op::kVar: body = n.next ? "X " + name(n.var) : name(n.var); break;
        case Op::kNot: body = "!" + run(n.lhs, prec); break;
        case Op::kAnd: body = run(n.lhs, prec) + " & " + run(n.rhs, prec + 1); break;
        case Op::kOr: body = run(n.lhs, prec) + " | " + run(n.rhs, prec + 1); break;
        case Op::kImplies:
          // Right associative: the left operand needs strictly tighter binding.
          body = run(n.lhs, prec + 1) + " -> " + run(n.rhs, prec);
          break;
      }
      if (prec < min_prec) return "(" + body + ")";
      return body;
    }
  };
  return Printer{nodes_, ap}.run(root_, 0);
}

}  // namespace permrl
