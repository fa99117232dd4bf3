// Copyright 2026 The pqdyn Authors
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "pqdyn/lexer.hpp"
#include "pqdyn/parser.hpp"
#include "pqdyn/pretty.hpp"
#include "pqdyn/span.hpp"
#include "pqdyn/term.hpp"

using namespace pqdyn;

namespace {

std::vector<Tok> kinds(const std::string& src) {
  std::vector<Tok> out;
  for (const Token& t : lex(src, "<lex>")) out.push_back(t.kind);
  return out;
}

}  // namespace

//============================================================================
// Lexer
//============================================================================

TEST_CASE("keywords, identifiers, and numbers") {
  auto ks = kinds("let in if then else case of box lift force apply dynlift");
  CHECK(ks == std::vector<Tok>{Tok::KwLet, Tok::KwIn, Tok::KwIf, Tok::KwThen,
                               Tok::KwElse, Tok::KwCase, Tok::KwOf, Tok::KwBox,
                               Tok::KwLift, Tok::KwForce, Tok::KwApply,
                               Tok::KwDynlift, Tok::Eof});

  auto toks = lex("foo q' a1_b 42", "<lex>");
  REQUIRE(toks.size() == 5);
  CHECK(toks[0].kind == Tok::Ident);
  CHECK(toks[0].text == "foo");
  CHECK(toks[1].text == "q'");
  CHECK(toks[2].text == "a1_b");
  CHECK(toks[3].kind == Tok::Number);
  CHECK(toks[3].text == "42");
}

TEST_CASE("annotated arrows and bangs lex as single tokens") {
  CHECK(kinds("-o -o_0 -o_1 -> ! !_0 !_1 ||") ==
        std::vector<Tok>{Tok::Lolli, Tok::LolliZero, Tok::LolliOne, Tok::Arrow,
                         Tok::Bang, Tok::BangZero, Tok::BangOne, Tok::OrOr,
                         Tok::Eof});
}

TEST_CASE("comments run to end of line") {
  auto ks = kinds("x -- the rest is commentary -o !_0\ny");
  CHECK(ks == std::vector<Tok>{Tok::Ident, Tok::Ident, Tok::Eof});
}

TEST_CASE("token positions are 1-based and track line starts") {
  auto toks = lex("ab cd\n  ef", "<lex>");
  REQUIRE(toks.size() == 4);
  CHECK(toks[0].span.line == 1);
  CHECK(toks[0].span.col == 1);
  CHECK(toks[0].first_on_line);
  CHECK(toks[1].span.col == 4);
  CHECK_FALSE(toks[1].first_on_line);
  CHECK(toks[2].span.line == 2);
  CHECK(toks[2].span.col == 3);
  CHECK(toks[2].first_on_line);
}

TEST_CASE("stray characters are syntax errors") {
  CHECK_THROWS_AS(lex("a # b", "<lex>"), Error);
  CHECK_THROWS_AS(lex("q @ r", "<lex>"), Error);
  try {
    lex("ok\n\tindент", "<lex>");
    FAIL("expected a syntax error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrKind::Syntax);
  }
}

//============================================================================
// Expression grammar
//============================================================================

TEST_CASE("application is left-associative and binds tighter than pairs") {
  TermPtr t = parse_term("f a b");
  REQUIRE(t->kind == TermKind::App);
  CHECK(t->t1->kind == TermKind::App);
  CHECK(t->t2->kind == TermKind::Var);
  CHECK(t->t2->name == "b");

  TermPtr p = parse_term("(f a, g b)");
  REQUIRE(p->kind == TermKind::Pair);
  CHECK(p->t1->kind == TermKind::App);
  CHECK(p->t2->kind == TermKind::App);
}

TEST_CASE("lambdas nest and extend to the right") {
  TermPtr t = parse_term("\\x -> \\y -> (y, x)");
  REQUIRE(t->kind == TermKind::Lambda);
  CHECK(t->name == "x");
  REQUIRE(t->t1->kind == TermKind::Lambda);
  CHECK(t->t1->name == "y");
  CHECK(t->t1->t1->kind == TermKind::Pair);
}

TEST_CASE("constructor atoms") {
  CHECK(parse_term("()")->kind == TermKind::UnitVal);
  CHECK(parse_term("True")->flag == true);
  CHECK(parse_term("False")->flag == false);
  CHECK(parse_term("Nothing")->kind == TermKind::NothingC);

  TermPtr j = parse_term("Just q");
  REQUIRE(j->kind == TermKind::JustC);
  CHECK(j->t1->name == "q");

  CHECK(parse_term("Z")->kind == TermKind::NatLit);
  CHECK(parse_term("Z")->nat == 0);
  CHECK(parse_term("3")->nat == 3);
  TermPtr s = parse_term("S (S Z)");
  REQUIRE(s->kind == TermKind::Succ);
  CHECK(s->t1->kind == TermKind::Succ);
}

TEST_CASE("modality-aware special forms") {
  TermPtr b = parse_term("box Qubit f");
  REQUIRE(b->kind == TermKind::Box);
  CHECK(b->ty->kind == TypeKind::Qubit);
  CHECK(b->t1->kind == TermKind::Var);

  TermPtr bp = parse_term("box (Qubit * Qubit) f");
  CHECK(bp->ty->kind == TypeKind::Tensor);

  CHECK(parse_term("lift u")->kind == TermKind::Lift);
  CHECK(parse_term("force u")->kind == TermKind::Force);
  CHECK(parse_term("dynlift m")->kind == TermKind::Dynlift);

  TermPtr a = parse_term("apply(c, q)");
  REQUIRE(a->kind == TermKind::Apply);
  CHECK(a->t1->name == "c");
  CHECK(a->t2->name == "q");
}

TEST_CASE("|| desugars to the prelude's or") {
  TermPtr t = parse_term("a || b");
  REQUIRE(t->kind == TermKind::App);
  REQUIRE(t->t1->kind == TermKind::App);
  CHECK(t->t1->t1->kind == TermKind::Var);
  CHECK(t->t1->t1->name == "or");
  CHECK(t->t1->t2->name == "a");
  CHECK(t->t2->name == "b");
}

//============================================================================
// Let blocks and pattern desugaring
//============================================================================

TEST_CASE("let with a variable pattern becomes a beta redex") {
  TermPtr t = parse_term("let x = f y in g x");
  REQUIRE(t->kind == TermKind::App);
  REQUIRE(t->t1->kind == TermKind::Lambda);
  CHECK(t->t1->name == "x");
  CHECK(t->t2->kind == TermKind::App);  // f y
}

TEST_CASE("let with unit and pair patterns") {
  TermPtr u = parse_term("let () = m in n");
  CHECK(u->kind == TermKind::LetUnit);

  TermPtr p = parse_term("let (a, b) = m in (b, a)");
  REQUIRE(p->kind == TermKind::LetPair);
  CHECK(p->name == "a");
  CHECK(p->name2 == "b");
}

TEST_CASE("wide tuple patterns nest to the right") {
  TermPtr t = parse_term("let (a, b, c) = m in a");
  // (a, rest) with rest destructured into (b, c).
  REQUIRE(t->kind == TermKind::LetPair);
  CHECK(t->name == "a");
  REQUIRE(t->t2->kind == TermKind::LetPair);
  CHECK(t->t2->name == "b");
  CHECK(t->t2->name2 == "c");
}

TEST_CASE("stacked let bindings align on the first binding's column") {
  TermPtr t = parse_term(
      "let a = f ()\n"
      "    b = g ()\n"
      "in h a b");
  // Two nested redexes, outermost binds a.
  REQUIRE(t->kind == TermKind::App);
  REQUIRE(t->t1->kind == TermKind::Lambda);
  CHECK(t->t1->name == "a");
  REQUIRE(t->t1->t1->kind == TermKind::App);
  CHECK(t->t1->t1->t1->name == "b");
}

TEST_CASE("a binding's right-hand side may continue on deeper lines") {
  TermPtr t = parse_term(
      "let a = f x\n"
      "          y\n"
      "    b = g a\n"
      "in (a, b)");
  REQUIRE(t->kind == TermKind::App);
  REQUIRE(t->t1->kind == TermKind::Lambda);
  CHECK(t->t1->name == "a");
  // rhs of a is the two-argument application f x y.
  REQUIRE(t->t2->kind == TermKind::App);
  CHECK(t->t2->t1->kind == TermKind::App);
}

TEST_CASE("bindings shadow sequentially") {
  TermPtr t = parse_term(
      "let q = f q\n"
      "    q = g q\n"
      "in q");
  REQUIRE(t->kind == TermKind::App);
  // Inner rhs g q refers to the outer binding, not itself.
  REQUIRE(t->t1->t1->kind == TermKind::App);
  const Term& inner = *t->t1->t1;
  CHECK(inner.t1->name == "q");  // the redex binding the second q
  CHECK(inner.t2->t1->name == "g");
}

TEST_CASE("case analysis on naturals and maybes") {
  TermPtr n = parse_term(
      "case n of\n"
      "  Z -> a\n"
      "  S k -> f k");
  REQUIRE(n->kind == TermKind::NatCase);
  CHECK(n->t1->name == "n");
  CHECK(n->t2->name == "a");
  CHECK(n->name == "k");

  TermPtr m = parse_term(
      "case m of\n"
      "  Nothing -> a\n"
      "  Just x -> f x");
  REQUIRE(m->kind == TermKind::MaybeCase);
  CHECK(m->name == "x");
}

TEST_CASE("if-then-else spans layout lines") {
  TermPtr t = parse_term(
      "if c\n"
      "  then f x\n"
      "  else g x");
  REQUIRE(t->kind == TermKind::If);
  CHECK(t->t1->name == "c");
  CHECK(t->t2->kind == TermKind::App);
  CHECK(t->t3->kind == TermKind::App);
}

//============================================================================
// Types
//============================================================================

TEST_CASE("type syntax round-trips through the printer") {
  CHECK(pretty_type(parse_type("!_1(Qubit -o_1 Qubit)")) ==
        "!_1(Qubit -o_1 Qubit)");
  CHECK(pretty_type(parse_type("Circ(Qubit * Qubit, Qubit)")) ==
        "Circ(Qubit * Qubit, Qubit)");
  CHECK(pretty_type(parse_type("Maybe (Qubit * Bit)")) ==
        "Maybe (Qubit * Bit)");
}

TEST_CASE("unannotated arrows parse with elided modalities") {
  TypePtr t = parse_type("Qubit -> Qubit");
  REQUIRE(t->kind == TypeKind::Arrow);
  CHECK(t->mod.tag == ModTerm::Tag::Elided);

  TypePtr l = parse_type("Qubit -o_0 Qubit");
  CHECK(l->mod.tag == ModTerm::Tag::Const);
  CHECK(l->mod.value == Modality::Zero);

  TypePtr b = parse_type("!(Unit -> Qubit)");
  REQUIRE(b->kind == TypeKind::Bang);
  CHECK(b->mod.tag == ModTerm::Tag::Elided);
}

TEST_CASE("tensor binds tighter than arrows and nests right") {
  TypePtr t = parse_type("Qubit * Qubit * Qubit -o_1 Qubit");
  REQUIRE(t->kind == TypeKind::Arrow);
  REQUIRE(t->a->kind == TypeKind::Tensor);
  // a * b * c = a * (b * c), matching the tuple desugaring.
  CHECK(t->a->a->kind == TypeKind::Qubit);
  CHECK(t->a->b->kind == TypeKind::Tensor);
}

//============================================================================
// Declarations and layout errors
//============================================================================

TEST_CASE("a program is a list of signature and equation pairs") {
  Program p = parse_program(
      "id : !(Qubit -> Qubit)\n"
      "id q = q\n"
      "\n"
      "both : !(Qubit -> Qubit * Qubit)\n"
      "both q = (q, q)\n",
      "two.pqd");
  REQUIRE(p.decls.size() == 2);
  CHECK(p.decls[0].name == "id");
  CHECK(p.decls[0].params == std::vector<std::string>{"q"});
  CHECK(p.decls[1].name == "both");
  CHECK(p.decls[1].declared->kind == TypeKind::Bang);
}

TEST_CASE("equations may be parameterless") {
  Program p = parse_program(
      "main : Bool\n"
      "main = True\n",
      "m.pqd");
  REQUIRE(p.decls.size() == 1);
  CHECK(p.decls[0].params.empty());
  CHECK(p.decls[0].body->kind == TermKind::BoolLit);
}

TEST_CASE("a declaration body may not dedent to column 1") {
  CHECK_THROWS_AS(parse_program("f : Bool\nf =\nTrue\n", "bad.pqd"), Error);
}

TEST_CASE("missing equation and missing signature are rejected") {
  CHECK_THROWS_AS(parse_program("f : Bool\n", "bad.pqd"), Error);
  CHECK_THROWS_AS(parse_program("f = True\n", "bad.pqd"), Error);
}

TEST_CASE("in closes the let block from any depth") {
  TermPtr t = parse_term("let a = f ()\n        in a");
  CHECK(t->kind == TermKind::App);
}

TEST_CASE("a misaligned second binding is rejected") {
  // b starts left of the binding column, so it cannot open a new binding,
  // and the block then lacks its `in`.
  CHECK_THROWS_AS(parse_term("let aa = f ()\n  b = g ()\nin b"), Error);
}

TEST_CASE("a right-hand side may not dedent to the binding column") {
  CHECK_THROWS_AS(parse_term("let a =\nf ()\nin a"), Error);
}

TEST_CASE("errors carry the position of the offending token") {
  try {
    parse_term("f (a,, b)");
    FAIL("expected a syntax error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrKind::Syntax);
    CHECK(e.span().line == 1);
    CHECK(e.span().col == 6);
  }
}
