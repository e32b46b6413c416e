#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mustcall/ast.hpp"
#include "mustcall/lexer.hpp"
#include "mustcall/parser.hpp"
#include "mustcall/pretty.hpp"

#include "test_util.hpp"

using namespace mustcall;
using mustcall::test::unit;

namespace {

std::vector<TokenKind> kinds_of(const std::string& text) {
    std::vector<TokenKind> out;
    for (const auto& tok : lex(unit(text))) {
        if (tok.kind != TokenKind::Eof) out.push_back(tok.kind);
    }
    return out;
}

} // namespace

TEST_CASE("lexing attribute brackets, creations and null comparisons") {
    CHECK(kinds_of("[Owning]") ==
          std::vector<TokenKind>{TokenKind::LBracket, TokenKind::Ident, TokenKind::RBracket});
    CHECK(kinds_of("new Socket()") == std::vector<TokenKind>{TokenKind::KwNew, TokenKind::Ident,
                                                             TokenKind::LParen,
                                                             TokenKind::RParen});
    CHECK(kinds_of("s != null") ==
          std::vector<TokenKind>{TokenKind::Ident, TokenKind::NotEq, TokenKind::KwNull});
}

TEST_CASE("tokens carry spans") {
    auto tokens = lex(unit("class A {\n    Socket s;\n}"));
    CHECK(tokens[0].span.line == 1);
    CHECK(tokens[0].span.column == 1);
    CHECK(tokens[3].text == "Socket");
    CHECK(tokens[3].span.line == 2);
    CHECK(tokens[3].span.column == 5);
}

TEST_CASE("lexical error reports line and column") {
    try {
        lex(unit("class A {\n  @ }"));
        FAIL("expected lexical error");
    } catch (const ParseError& err) {
        CHECK(err.diag().line == 2);
        CHECK(err.diag().column == 3);
    }
}

TEST_CASE("parsing a MustCall-annotated disposable class") {
    auto tree = parse_unit(unit("[MustCall(Dispose)]\n"
                                "class Container : IDisposable {\n"
                                "    public void Dispose() { ...; }\n"
                                "}\n"));
    REQUIRE(tree->classes.size() == 1);
    const ClassDecl& cls = tree->classes[0];
    CHECK(cls.name == "Container");
    CHECK(cls.heritage == "IDisposable");
    REQUIRE(cls.attributes.size() == 1);
    CHECK(cls.attributes[0].kind == AttributeKind::MustCall);
    CHECK(cls.attributes[0].args == std::vector<std::string>{"Dispose"});
}

TEST_CASE("ownership attributes land on return positions and parameters") {
    auto tree = parse_unit(unit("class W {\n"
                                "    [Owning] Socket createSocket() { return new Socket(...); }\n"
                                "    void closeSocket([Owning] Socket s) { s.Dispose(); }\n"
                                "}\n"));
    const MethodDecl& create = tree->classes[0].methods[0];
    REQUIRE(create.return_attributes.size() == 1);
    CHECK(create.return_attributes[0].kind == AttributeKind::Owning);
    const MethodDecl& close = tree->classes[0].methods[1];
    REQUIRE(close.params.size() == 1);
    REQUIRE(close.params[0].attributes.size() == 1);
    CHECK(close.params[0].attributes[0].kind == AttributeKind::Owning);
}

TEST_CASE("attribute argument lists") {
    auto tree = parse_unit(unit("[MustCall(Dispose)]\n"
                                "class C {\n"
                                "    [Owning] Socket socket;\n"
                                "    [EnsuresCalledMethods(socket, Dispose)]\n"
                                "    void Dispose() { socket.Dispose(); }\n"
                                "    [CreateMustCallFor(socket)]\n"
                                "    void reset([MustCallAlias] Socket s) { ...; }\n"
                                "}\n"));
    const ClassDecl& cls = tree->classes[0];
    const AttributeSpec& ecm = cls.methods[0].method_attributes[0];
    CHECK(ecm.kind == AttributeKind::EnsuresCalledMethods);
    CHECK(ecm.args == std::vector<std::string>{"socket", "Dispose"});
    const AttributeSpec& cmcf = cls.methods[1].method_attributes[0];
    CHECK(cmcf.kind == AttributeKind::CreateMustCallFor);
    CHECK(cmcf.args == std::vector<std::string>{"socket"});
    const AttributeSpec& mca = cls.methods[1].params[0].attributes[0];
    CHECK(mca.kind == AttributeKind::MustCallAlias);
    CHECK(mca.args.empty());
}

TEST_CASE("unknown attributes and wrong arities are hard parse errors") {
    CHECK_THROWS_AS(parse_unit(unit("[Frees] class A { }")), ParseError);
    CHECK_THROWS_AS(parse_unit(unit("[MustCall] class A { }")), ParseError);
    CHECK_THROWS_AS(parse_unit(unit("[MustCall(a, b)] class A { }")), ParseError);
    CHECK_THROWS_AS(parse_unit(unit("class A { [Owning(x)] Socket s; }")), ParseError);
}

TEST_CASE("attribute placement is validated") {
    // MustCall is a type attribute
    CHECK_THROWS_AS(parse_unit(unit("class A { [MustCall(Dispose)] void f() { ...; } }")),
                    ParseError);
    // EnsuresCalledMethods cannot annotate a field
    CHECK_THROWS_AS(parse_unit(unit("class A { [EnsuresCalledMethods(a, b)] Socket s; }")),
                    ParseError);
    // Owning cannot annotate a class
    CHECK_THROWS_AS(parse_unit(unit("[Owning] class A { }")), ParseError);
    // one EnsuresCalledMethods per method
    CHECK_THROWS_AS(parse_unit(unit("class A { Socket f; [EnsuresCalledMethods(f, Dispose)] "
                                    "[EnsuresCalledMethods(f, Close)] void d() { ...; } }")),
                    ParseError);
}

TEST_CASE("bare rethrow is only legal inside catch blocks") {
    CHECK_THROWS_AS(parse_unit(unit("class A { void f() { throw; } }")), ParseError);
    CHECK_NOTHROW(
        parse_unit(unit("class A { void f() { try { ...; } catch (...) { throw; } } }")));
}

TEST_CASE("syntax errors carry the expected token") {
    try {
        parse_unit(unit("class A { void f( { } }"));
        FAIL("expected syntax error");
    } catch (const ParseError& err) {
        CHECK(err.diag().message.find("expected") != std::string::npos);
        CHECK(err.diag().line == 1);
    }
}

TEST_CASE("using declarations bind exactly one initializer") {
    auto tree =
        parse_unit(unit("class A { void f() { using (var s = new Socket(...)) { ...; } } }"));
    const auto& body = tree->classes[0].methods[0].body;
    REQUIRE(body->statements.size() == 1);
    CHECK(body->statements[0]->kind == StmtKind::Using);
    CHECK_THROWS_AS(parse_unit(unit("class A { void f() { using (var s) { } } }")), ParseError);
}

TEST_CASE("parsing is deterministic") {
    std::string text = "class A { void f() { Socket s = new Socket(...); s.Dispose(); } }";
    auto first = parse_unit(unit(text));
    auto second = parse_unit(unit(text));
    CHECK(ast_equal(*first, *second));
}

namespace {

void check_attr_arity(const std::vector<AttributeSpec>& attrs) {
    for (const auto& attr : attrs) {
        CHECK(static_cast<int>(attr.args.size()) == attribute_arity(attr.kind));
    }
}

} // namespace

TEST_CASE("round trip and attribute arity over the golden corpus") {
    int files = 0;
    for (const auto& entry :
         std::filesystem::recursive_directory_iterator(MUSTCALL_CORPUS_DIR)) {
        if (entry.path().extension() != ".moo") continue;
        files++;
        std::ifstream in(entry.path());
        std::ostringstream text;
        text << in.rdbuf();
        auto original = parse_unit(unit(text.str(), entry.path().filename().string()));

        for (const auto& cls : original->classes) {
            check_attr_arity(cls.attributes);
            for (const auto& f : cls.fields) check_attr_arity(f.attributes);
            for (const auto& m : cls.methods) {
                check_attr_arity(m.return_attributes);
                check_attr_arity(m.method_attributes);
                for (const auto& p : m.params) check_attr_arity(p.attributes);
            }
        }

        std::string printed = pretty_print(*original);
        auto reparsed = parse_unit(unit(printed, "reprint.moo"));
        bool same = ast_equal(*original, *reparsed);
        CHECK_MESSAGE(same, "round-trip mismatch for ", entry.path().string());
    }
    CHECK(files >= 25);
}
