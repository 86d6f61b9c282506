// Copyright 2026 The gptc Authors
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

#pragma once

#include <cctype>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gptc/errors.hpp"
#include "gptc/fragment.hpp"

// Text form of the index notation for fragments:
//
//   type a : N=2          # optional header, one per type letter
//   A_{a1 a2 b3}^{b4 c5}  B_{a6 b4}^{d7 c8}
//
// Terms are whitespace-separated. `_{...}` lists input wires (subscripts),
// `^{...}` output wires (superscripts); either block may be omitted and they
// may appear in either order. A wire token is a lowercase type letter
// followed by a positive integer. An integer appearing in one superscript
// and one subscript of the same type letter denotes a wire; an integer
// appearing once is an open port. `#` starts a comment to end of line.

namespace gptc {
namespace detail {

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;
  int line = 1;
  int col = 1;

  bool done() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
  char next() {
    char c = text[pos++];
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return c;
  }
  void skip_ws_and_comments() {
    while (!done()) {
      char c = peek();
      if (c == '#') {
        while (!done() && peek() != '\n') next();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        next();
      } else {
        return;
      }
    }
  }
};

struct RawToken {  // one wire token, e.g. b4
  char letter;
  long index;
  int line, col;
};

struct RawTerm {
  std::string name;
  std::vector<RawToken> subs, sups;
  bool has_sub_block = false, has_sup_block = false;
  int line, col;
};

inline std::vector<RawToken> parse_block(Cursor& c) {
  // cursor sits on '{'
  c.next();
  std::vector<RawToken> toks;
  while (true) {
    c.skip_ws_and_comments();
    if (c.done()) throw SyntaxError("unterminated index block", c.line, c.col);
    char ch = c.peek();
    if (ch == '}') {
      c.next();
      return toks;
    }
    if (ch == ',') {
      c.next();
      continue;
    }
    if (!std::islower(static_cast<unsigned char>(ch)))
      throw SyntaxError(std::string("expected type letter, got '") + ch + "'", c.line, c.col);
    RawToken t{ch, 0, c.line, c.col};
    c.next();
    if (c.done() || !std::isdigit(static_cast<unsigned char>(c.peek())))
      throw SyntaxError("wire token needs an integer after the type letter", c.line, c.col);
    while (!c.done() && std::isdigit(static_cast<unsigned char>(c.peek())))
      t.index = t.index * 10 + (c.next() - '0');
    if (t.index <= 0) throw SyntaxError("wire integers are positive", t.line, t.col);
    toks.push_back(t);
  }
}

}  // namespace detail

/// Parses a notation document into a validated fragment. Type declarations
/// are recorded on the fragment; undeclared letters stay unresolved until a
/// theory is bound.
inline Fragment parse(std::string_view text) {
  detail::Cursor c{text};
  std::map<std::string, int> declared;
  std::vector<detail::RawTerm> terms;

  while (true) {
    c.skip_ws_and_comments();
    if (c.done()) break;
    int tline = c.line, tcol = c.col;
    if (!std::isalpha(static_cast<unsigned char>(c.peek())))
      throw SyntaxError(std::string("expected term name, got '") + c.peek() + "'", c.line, c.col);
    std::string name;
    while (!c.done() && std::isalnum(static_cast<unsigned char>(c.peek()))) name += c.next();

    // header line: type <letter> : N=<int>
    if (name == "type") {
      c.skip_ws_and_comments();
      if (c.done() || !std::islower(static_cast<unsigned char>(c.peek())))
        throw SyntaxError("type declaration needs a lowercase letter", c.line, c.col);
      std::string label(1, c.next());
      if (!c.done() && std::isalnum(static_cast<unsigned char>(c.peek())))
        throw SyntaxError("type labels are single letters", c.line, c.col);
      c.skip_ws_and_comments();
      if (c.done() || c.peek() != ':') throw SyntaxError("expected ':'", c.line, c.col);
      c.next();
      c.skip_ws_and_comments();
      if (c.done() || (c.peek() != 'N' && c.peek() != 'n'))
        throw SyntaxError("expected N=<int>", c.line, c.col);
      c.next();
      c.skip_ws_and_comments();
      if (c.done() || c.peek() != '=') throw SyntaxError("expected '='", c.line, c.col);
      c.next();
      c.skip_ws_and_comments();
      int n = 0;
      if (c.done() || !std::isdigit(static_cast<unsigned char>(c.peek())))
        throw SyntaxError("expected integer after N=", c.line, c.col);
      while (!c.done() && std::isdigit(static_cast<unsigned char>(c.peek())))
        n = n * 10 + (c.next() - '0');
      if (n < 1) throw SyntaxError("N must be positive", tline, tcol);
      auto it = declared.find(label);
      if (it != declared.end() && it->second != n)
        throw SyntaxError("conflicting declaration for type " + label, tline, tcol);
      declared[label] = n;
      continue;
    }

    detail::RawTerm term;
    term.name = std::move(name);
    term.line = tline;
    term.col = tcol;
    while (!c.done() && (c.peek() == '_' || c.peek() == '^')) {
      char kind = c.next();
      if (c.done() || c.peek() != '{')
        throw SyntaxError("expected '{' after block marker", c.line, c.col);
      auto toks = detail::parse_block(c);
      if (kind == '_') {
        if (term.has_sub_block)
          throw SyntaxError("term has two subscript blocks", term.line, term.col);
        term.has_sub_block = true;
        term.subs = std::move(toks);
      } else {
        if (term.has_sup_block)
          throw SyntaxError("term has two superscript blocks", term.line, term.col);
        term.has_sup_block = true;
        term.sups = std::move(toks);
      }
    }
    terms.push_back(std::move(term));
  }

  if (terms.empty()) throw SyntaxError("document contains no operation terms", c.line, c.col);

  // Each integer may appear once as a superscript (producer) and once as a
  // subscript (consumer) with the same type letter.
  struct Occurrence {
    int term = -1;
    int port = -1;
    char letter = 0;
  };
  std::map<long, Occurrence> producers, consumers;

  Fragment frag;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& t = terms[i];
    OperationInstance op;
    op.name = t.name;
    for (std::size_t p = 0; p < t.subs.size(); ++p) {
      const auto& tok = t.subs[p];
      op.inputs.emplace_back(1, tok.letter);
      if (consumers.count(tok.index))
        throw DuplicateIndexRole("index " + std::to_string(tok.index) +
                                 " used as input twice");
      consumers[tok.index] = {static_cast<int>(i), static_cast<int>(p), tok.letter};
    }
    for (std::size_t p = 0; p < t.sups.size(); ++p) {
      const auto& tok = t.sups[p];
      op.outputs.emplace_back(1, tok.letter);
      if (producers.count(tok.index))
        throw DuplicateIndexRole("index " + std::to_string(tok.index) +
                                 " used as output twice");
      producers[tok.index] = {static_cast<int>(i), static_cast<int>(p), tok.letter};
    }
    frag = frag.with_op(std::move(op));
  }
  for (const auto& [label, n] : declared) frag.declare_N(label, n);

  for (const auto& [index, prod] : producers) {
    auto it = consumers.find(index);
    if (it == consumers.end()) continue;
    const Occurrence& cons = it->second;
    if (prod.letter != cons.letter)
      throw TypeLetterMismatch("index " + std::to_string(index) + " written as " +
                               std::string(1, prod.letter) + " and " +
                               std::string(1, cons.letter));
    try {
      frag = frag.connect({prod.term, prod.port}, {cons.term, cons.port});
    } catch (const WouldCreateCycle& e) {
      throw CycleError(std::string("index ") + std::to_string(index) + ": " + e.what());
    }
  }
  frag.validate();
  return frag;
}

/// Canonical text form: ops in canonical order, wire integers assigned in
/// first-use order. parse(render(f)) is isomorphic to f for any fragment
/// expressible in the notation (settings and outcome tags have no text form).
inline std::string render(const Fragment& frag) {
  frag.validate();
  std::string out;
  for (const auto& [label, n] : frag.declared_N())
    out += "type " + label + " : N=" + std::to_string(n) + "\n";

  const std::vector<int> order = frag.canonical_order();
  std::vector<int> pos(frag.op_count());
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = static_cast<int>(i);

  long counter = 1;
  std::map<int, long> wire_integer;  // wire index -> assigned integer
  bool first = true;
  for (int op_idx : order) {
    const OperationInstance& op = frag.op(op_idx);
    if (!first) out += ' ';
    first = false;
    out += op.name;
    if (!op.inputs.empty()) {
      out += "_{";
      for (std::size_t p = 0; p < op.inputs.size(); ++p) {
        if (p) out += ' ';
        int w = frag.in_wire_of({op_idx, static_cast<int>(p)});
        long idx;
        if (w >= 0) {
          idx = wire_integer.at(w);  // producer already emitted
        } else {
          idx = counter++;
        }
        out += op.inputs[p] + std::to_string(idx);
      }
      out += '}';
    }
    if (!op.outputs.empty()) {
      out += "^{";
      for (std::size_t p = 0; p < op.outputs.size(); ++p) {
        if (p) out += ' ';
        long idx = counter++;
        int w = frag.out_wire_of({op_idx, static_cast<int>(p)});
        if (w >= 0) wire_integer[w] = idx;
        out += op.outputs[p] + std::to_string(idx);
      }
      out += '}';
    }
  }
  out += '\n';
  return out;
}

}  // namespace gptc
