//===-- Parser.cpp - Lexer and recursive-descent parser -------------------===//

#include "symdeffix/Parser.h"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace symdeffix {

namespace {

enum class Tok { Int, Ident, Keyword, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int64_t value = 0;
  int line = 1;
  int column = 1;
};

const std::set<std::string> kKeywords = {"int",   "char",   "void",
                                         "if",    "else",   "while",
                                         "for",   "return", "sizeof"};

std::vector<Token> lex(const std::string &src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace((unsigned char)c)) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n')
        advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
      int l = line, cl = col;
      advance(2);
      while (i + 1 < src.size() && !(src[i] == '*' && src[i + 1] == '/'))
        advance(1);
      if (i + 1 >= src.size())
        throw SyntaxError(l, cl, "unterminated comment");
      advance(2);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (std::isdigit((unsigned char)c)) {
      size_t j = i;
      while (j < src.size() && std::isdigit((unsigned char)src[j]))
        ++j;
      t.kind = Tok::Int;
      t.text = src.substr(i, j - i);
      try {
        t.value = std::stoll(t.text);
      } catch (const std::out_of_range &) {
        throw SyntaxError(line, col, "integer literal out of range");
      }
      if (j < src.size() &&
          (std::isalpha((unsigned char)src[j]) || src[j] == '_'))
        throw SyntaxError(line, col, "malformed number");
      advance(j - i);
      out.push_back(t);
      continue;
    }
    if (std::isalpha((unsigned char)c) || c == '_') {
      size_t j = i;
      while (j < src.size() &&
             (std::isalnum((unsigned char)src[j]) || src[j] == '_'))
        ++j;
      t.text = src.substr(i, j - i);
      t.kind = kKeywords.count(t.text) ? Tok::Keyword : Tok::Ident;
      advance(j - i);
      out.push_back(t);
      continue;
    }
    static const char *two[] = {"<=", ">=", "==", "!=", "&&", "||", "++", "--"};
    bool matched = false;
    for (const char *p : two) {
      if (src.compare(i, 2, p) == 0) {
        t.kind = Tok::Punct;
        t.text = p;
        advance(2);
        out.push_back(t);
        matched = true;
        break;
      }
    }
    if (matched)
      continue;
    if (std::string("(){}[];,=+-*/%<>!").find(c) != std::string::npos) {
      t.kind = Tok::Punct;
      t.text = std::string(1, c);
      advance(1);
      out.push_back(t);
      continue;
    }
    if (c == '#')
      throw SyntaxError(line, col, "preprocessor directives are not supported");
    throw SyntaxError(line, col, std::string("unexpected character '") + c + "'");
  }
  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

class Parser {
public:
  Parser(std::vector<Token> toks, Program &prog)
      : toks_(std::move(toks)), prog_(prog) {}

  void parseUnit() {
    while (!at(Tok::End)) {
      int line = peek().line;
      if (isBufTypeStart()) {
        auto [type, spell] = parseBufType();
        (void)spell;
        (void)type;
        throw SyntaxError(line, peek().column,
                          "global buffers are not supported");
      }
      if (!atKeyword("int") && !atKeyword("void"))
        fail("expected a global declaration or function definition");
      bool isVoid = atKeyword("void");
      next();
      Token name = expectIdent();
      if (atPunct("(")) {
        parseFunction(isVoid ? Type::Void : Type::Int, name, line);
        continue;
      }
      if (isVoid)
        fail("variables cannot have type void");
      GlobalDecl g;
      g.id = prog_.freshId();
      g.line = name.line;
      g.name = name.text;
      if (acceptPunct("=")) {
        bool neg = acceptPunct("-");
        Token v = peek();
        if (v.kind != Tok::Int)
          fail("global initializers must be integer constants");
        next();
        g.init = neg ? -v.value : v.value;
      }
      expectPunct(";");
      prog_.globals.push_back(g);
    }
  }

private:
  const Token &peek(size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  void next() {
    if (pos_ < toks_.size() - 1)
      ++pos_;
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool atPunct(const char *p, size_t k = 0) const {
    return peek(k).kind == Tok::Punct && peek(k).text == p;
  }
  bool atKeyword(const char *kw, size_t k = 0) const {
    return peek(k).kind == Tok::Keyword && peek(k).text == kw;
  }
  bool acceptPunct(const char *p) {
    if (!atPunct(p))
      return false;
    next();
    return true;
  }
  [[noreturn]] void fail(const std::string &msg) const {
    const Token &t = peek();
    std::string near = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError(t.line, t.column, msg + " near " + near);
  }
  void expectPunct(const char *p) {
    if (!acceptPunct(p))
      fail(std::string("expected '") + p + "'");
  }
  Token expectIdent() {
    if (!at(Tok::Ident))
      fail("expected identifier");
    Token t = peek();
    next();
    return t;
  }

  /// `buf x`, `char *x`, `int *x` (contextual: `buf` is only a type when an
  /// identifier follows).
  bool isBufTypeStart() const {
    if (peek().kind == Tok::Ident && peek().text == "buf" &&
        peek(1).kind == Tok::Ident)
      return true;
    return (atKeyword("char") || atKeyword("int")) && atPunct("*", 1);
  }

  std::pair<Type, std::string> parseBufType() {
    if (peek().kind == Tok::Ident) {
      next();
      return {Type::Buf, "buf"};
    }
    std::string spell = peek().text + " *";
    next();
    next();
    return {Type::Buf, spell};
  }

  void parseFunction(Type ret, const Token &name, int line) {
    FunctionDef fn;
    fn.id = prog_.freshId();
    fn.line = line;
    fn.returnType = ret;
    fn.name = name.text;
    expectPunct("(");
    if (!atPunct(")")) {
      if (atKeyword("void") && atPunct(")", 1)) {
        next();
      } else {
        do {
          Param p;
          p.line = peek().line;
          if (isBufTypeStart()) {
            auto [t, spell] = parseBufType();
            p.type = t;
            p.typeSpelling = spell;
          } else if (atKeyword("int")) {
            next();
            p.type = Type::Int;
            p.typeSpelling = "int";
          } else {
            fail("expected parameter type");
          }
          p.id = prog_.freshId();
          p.name = expectIdent().text;
          fn.params.push_back(p);
        } while (acceptPunct(","));
      }
    }
    expectPunct(")");
    if (!atPunct("{"))
      fail("expected function body");
    fn.body = parseBlock();
    prog_.functions.push_back(std::move(fn));
  }

  StmtPtr newStmt(StmtKind k, int line) {
    auto s = std::make_unique<Stmt>();
    s->kind = k;
    s->id = prog_.freshId();
    s->line = line;
    return s;
  }

  ExprPtr newExpr(ExprKind k, int line) {
    auto e = std::make_unique<Expr>();
    e->kind = k;
    e->id = prog_.freshId();
    e->line = line;
    return e;
  }

  StmtPtr parseBlock() {
    auto b = newStmt(StmtKind::Block, peek().line);
    expectPunct("{");
    while (!atPunct("}")) {
      if (at(Tok::End))
        fail("expected '}'");
      b->stmts.push_back(parseStmt());
    }
    expectPunct("}");
    return b;
  }

  bool atDeclStart() const {
    return isBufTypeStart() || atKeyword("int") || atKeyword("char");
  }

  StmtPtr parseDecl() {
    int line = peek().line;
    auto s = newStmt(StmtKind::Decl, line);
    if (isBufTypeStart()) {
      auto [t, spell] = parseBufType();
      (void)t;
      s->declType = DeclType::BufRef;
      s->typeSpelling = spell;
      s->name = expectIdent().text;
      if (acceptPunct("="))
        s->value = parseExpr();
      return s;
    }
    bool isChar = atKeyword("char");
    s->typeSpelling = peek().text;
    next();
    s->name = expectIdent().text;
    if (acceptPunct("[")) {
      if (!at(Tok::Int))
        fail("array size must be an integer constant");
      s->declType = DeclType::Array;
      s->arraySize = peek().value;
      if (s->arraySize <= 0)
        fail("array size must be positive");
      next();
      expectPunct("]");
      return s;
    }
    if (isChar)
      fail("scalar char variables are not supported; use int");
    s->declType = DeclType::Int;
    if (acceptPunct("="))
      s->value = parseExpr();
    return s;
  }

  /// Assignment, store, increment, or expression statement (no trailing ';').
  StmtPtr parseSimple() {
    int line = peek().line;
    if (at(Tok::Ident) && (atPunct("++", 1) || atPunct("--", 1))) {
      auto s = newStmt(StmtKind::Assign, line);
      Token name = peek();
      next();
      bool inc = peek().text == "++";
      next();
      s->name = name.text;
      s->form = inc ? AssignForm::PostInc : AssignForm::PostDec;
      auto var = newExpr(ExprKind::Var, line);
      var->name = name.text;
      auto one = newExpr(ExprKind::IntLit, line);
      one->value = 1;
      auto bin = newExpr(ExprKind::Binary, line);
      bin->binOp = inc ? BinOp::Add : BinOp::Sub;
      bin->operands.push_back(std::move(var));
      bin->operands.push_back(std::move(one));
      s->value = std::move(bin);
      return s;
    }
    if (at(Tok::Ident) && atPunct("=", 1)) {
      auto s = newStmt(StmtKind::Assign, line);
      s->name = peek().text;
      next();
      next();
      s->value = parseExpr();
      return s;
    }
    if (at(Tok::Ident) && atPunct("[", 1)) {
      // Either a store `b[e] = v` or an expression statement `b[e]`.
      size_t save = pos_;
      NodeId saveId = prog_.nextId;
      auto s = newStmt(StmtKind::Assign, line);
      s->name = peek().text;
      next();
      next();
      s->index = parseExpr();
      expectPunct("]");
      if (acceptPunct("=")) {
        s->value = parseExpr();
        return s;
      }
      pos_ = save;
      prog_.nextId = saveId;
    }
    auto s = newStmt(StmtKind::ExprStmt, line);
    s->value = parseExpr();
    return s;
  }

  StmtPtr parseStmt() {
    int line = peek().line;
    if (atPunct("{"))
      return parseBlock();
    if (atKeyword("if")) {
      auto s = newStmt(StmtKind::If, line);
      next();
      expectPunct("(");
      s->cond = parseExpr();
      expectPunct(")");
      s->thenBranch = parseStmt();
      if (atKeyword("else")) {
        next();
        s->elseBranch = parseStmt();
      }
      return s;
    }
    if (atKeyword("while")) {
      auto s = newStmt(StmtKind::While, line);
      next();
      expectPunct("(");
      s->cond = parseExpr();
      expectPunct(")");
      s->body = parseStmt();
      return s;
    }
    if (atKeyword("for")) {
      auto s = newStmt(StmtKind::For, line);
      next();
      expectPunct("(");
      if (!atPunct(";"))
        s->init = atDeclStart() ? parseDecl() : parseSimple();
      expectPunct(";");
      if (atPunct(";"))
        fail("for-statements require a condition");
      s->cond = parseExpr();
      expectPunct(";");
      if (!atPunct(")"))
        s->step = parseSimple();
      expectPunct(")");
      s->body = parseStmt();
      return s;
    }
    if (atKeyword("return")) {
      auto s = newStmt(StmtKind::Return, line);
      next();
      if (!atPunct(";"))
        s->value = parseExpr();
      expectPunct(";");
      return s;
    }
    if (atKeyword("else"))
      fail("'else' without 'if'");
    if (peek().kind == Tok::Ident && (peek().text == "goto"))
      fail("goto is not supported");
    StmtPtr s = atDeclStart() ? parseDecl() : parseSimple();
    expectPunct(";");
    return s;
  }

  // Precedence climbing: || < && < == != < relational < additive < mul.
  ExprPtr parseExpr() { return parseBinary(0); }

  static int precedence(const std::string &op) {
    if (op == "||")
      return 1;
    if (op == "&&")
      return 2;
    if (op == "==" || op == "!=")
      return 3;
    if (op == "<" || op == "<=" || op == ">" || op == ">=")
      return 4;
    if (op == "+" || op == "-")
      return 5;
    if (op == "*" || op == "/" || op == "%")
      return 6;
    return 0;
  }

  static BinOp toBinOp(const std::string &op) {
    static const std::map<std::string, BinOp> m = {
        {"+", BinOp::Add}, {"-", BinOp::Sub},  {"*", BinOp::Mul},
        {"/", BinOp::Div}, {"%", BinOp::Mod},  {"<", BinOp::Lt},
        {"<=", BinOp::Le}, {">", BinOp::Gt},   {">=", BinOp::Ge},
        {"==", BinOp::Eq}, {"!=", BinOp::Ne},  {"&&", BinOp::And},
        {"||", BinOp::Or}};
    return m.at(op);
  }

  ExprPtr parseBinary(int minPrec) {
    ExprPtr lhs = parseUnary();
    for (;;) {
      if (peek().kind != Tok::Punct)
        return lhs;
      int prec = precedence(peek().text);
      if (prec == 0 || prec <= minPrec)
        return lhs;
      Token op = peek();
      next();
      ExprPtr rhs = parseBinary(prec);
      auto e = newExpr(ExprKind::Binary, op.line);
      e->binOp = toBinOp(op.text);
      e->operands.push_back(std::move(lhs));
      e->operands.push_back(std::move(rhs));
      lhs = std::move(e);
    }
  }

  ExprPtr parseUnary() {
    if (atPunct("-") || atPunct("!")) {
      int line = peek().line;
      bool neg = peek().text == "-";
      next();
      auto operand = parseUnary();
      if (neg && operand->kind == ExprKind::IntLit &&
          operand->id == prog_.nextId - 1) {
        // Fold `-literal` so negative constants print and reparse stably.
        operand->value = -operand->value;
        operand->line = line;
        return operand;
      }
      auto e = newExpr(ExprKind::Unary, line);
      e->unOp = neg ? UnOp::Neg : UnOp::Not;
      e->operands.push_back(std::move(operand));
      return e;
    }
    return parsePrimary();
  }

  ExprPtr parsePrimary() {
    const Token t = peek();
    if (t.kind == Tok::Int) {
      next();
      auto e = newExpr(ExprKind::IntLit, t.line);
      e->value = t.value;
      return e;
    }
    if (atKeyword("sizeof")) {
      next();
      expectPunct("(");
      auto e = newExpr(ExprKind::SizeOf, t.line);
      e->name = expectIdent().text;
      expectPunct(")");
      return e;
    }
    if (acceptPunct("(")) {
      auto e = parseExpr();
      expectPunct(")");
      return e;
    }
    if (t.kind == Tok::Ident) {
      next();
      if (acceptPunct("(")) {
        auto e = newExpr(ExprKind::Call, t.line);
        e->name = t.text;
        if (!atPunct(")")) {
          do {
            e->operands.push_back(parseExpr());
          } while (acceptPunct(","));
        }
        expectPunct(")");
        return e;
      }
      if (acceptPunct("[")) {
        auto e = newExpr(ExprKind::Index, t.line);
        e->name = t.text;
        e->operands.push_back(parseExpr());
        expectPunct("]");
        return e;
      }
      auto e = newExpr(ExprKind::Var, t.line);
      e->name = t.text;
      return e;
    }
    fail("expected expression");
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  Program &prog_;
};

} // namespace

Program parse(const std::string &source, const std::string &path) {
  Program p;
  p.sourcePath = path;
  Parser(lex(source), p).parseUnit();
  typeCheck(p);
  return p;
}

Program parseFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

} // namespace symdeffix
