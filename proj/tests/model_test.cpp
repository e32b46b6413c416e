#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mustcall/model.hpp"
#include "mustcall/overlay.hpp"

#include "test_util.hpp"

using namespace mustcall;
using mustcall::test::method_of;
using mustcall::test::model_of;

namespace {

const std::string kOwningFieldListing =
    "[MustCall(Dispose)]\n"
    "class Container {\n"
    "    [Owning]\n"
    "    private readonly Socket socket;\n"
    "    public Container() {\n"
    "        socket = new Socket(...);\n"
    "    }\n"
    "    [EnsuresCalledMethods(socket, Dispose)]\n"
    "    public void Dispose() {\n"
    "        socket.Dispose();\n"
    "    }\n"
    "    public static void Main() {\n"
    "        Container c = new Container();\n"
    "        c.Dispose();\n"
    "    }\n"
    "}\n";

} // namespace

TEST_CASE("model resolves an attributed container class") {
    SemanticModel model = model_of(kOwningFieldListing);
    CHECK(model.errors().empty());
    const TypeInfo* container = model.find_type("Container");
    REQUIRE(container != nullptr);
    const FieldInfo* socket = container->find_field("socket");
    REQUIRE(socket != nullptr);
    CHECK(socket->is_owning());
    CHECK(socket->type == "Socket");
    const MethodInfo* dispose = container->find_method("Dispose");
    REQUIRE(dispose != nullptr);
    const AttributeSpec* ecm = dispose->ensures_called();
    REQUIRE(ecm != nullptr);
    CHECK(ecm->args == std::vector<std::string>{"socket", "Dispose"});
}

TEST_CASE("empty input builds an empty model without errors") {
    SemanticModel model = model_of(std::vector<std::string>{});
    CHECK(model.errors().empty());
    CHECK(model.user_types().empty());
}

TEST_CASE("duplicate type names are rejected") {
    SemanticModel model = model_of("class C { }\nclass C { }\n");
    REQUIRE(model.errors().size() == 1);
    CHECK(model.errors()[0].message.find("duplicate type name") != std::string::npos);
}

TEST_CASE("unresolved references become model errors") {
    SemanticModel model = model_of("class A { Missing f; }");
    REQUIRE(!model.errors().empty());
    CHECK(model.errors()[0].message.find("unknown type 'Missing'") != std::string::npos);

    SemanticModel m2 = model_of("class A { void f() { g(); } }");
    REQUIRE(!m2.errors().empty());
    CHECK(m2.errors()[0].message.find("unresolved method") != std::string::npos);

    SemanticModel m3 = model_of("class A { void f() { x.Dispose(); } }");
    CHECK(!m3.errors().empty());
}

TEST_CASE("supertype cycles are rejected") {
    SemanticModel model = model_of("class A : B { }\nclass B : A { }\n");
    CHECK(!model.errors().empty());
}

TEST_CASE("RType membership rules") {
    SemanticModel model = model_of("[MustCall(Dispose)]\n"
                                   "class Container : IDisposable {\n"
                                   "    public void Dispose() { ...; }\n"
                                   "}\n"
                                   "class Plain {\n"
                                   "    int counter;\n"
                                   "}\n"
                                   "class Sub : Container {\n"
                                   "}\n"
                                   "class HasOwning {\n"
                                   "    [Owning] Socket s;\n"
                                   "}\n"
                                   "class Pool {\n"
                                   "    List<Socket> sockets;\n"
                                   "}\n");
    const auto& rtype = model.rtype();
    CHECK(rtype.count("Container") == 1);      // implements IDisposable (+ MustCall)
    CHECK(rtype.count("Plain") == 0);          // no rule applies
    CHECK(rtype.count("Sub") == 1);            // subtype of an RType member
    CHECK(rtype.count("HasOwning") == 1);      // owns an Owning field
    CHECK(rtype.count("List<Socket>") == 1);   // collection of an RType member
    CHECK(rtype.count("Socket") == 1);         // built-in disposable
    CHECK(rtype.count("int") == 0);
}

TEST_CASE("RType is a fixpoint: re-applying the rules adds nothing") {
    SemanticModel model = model_of(kOwningFieldListing);
    CHECK(model.compute_rtype() == model.rtype());
}

TEST_CASE("adding attributes never shrinks RType") {
    std::string plain = "class A {\n    Socket s;\n}\n";
    std::string annotated = "class A {\n    [Owning] Socket s;\n}\n";
    SemanticModel before = model_of(plain);
    SemanticModel after = model_of(annotated);
    for (const auto& name : before.rtype()) {
        CHECK(after.rtype().count(name) == 1);
    }
    CHECK(after.rtype().count("A") == 1);
    CHECK(before.rtype().count("A") == 0);
}

TEST_CASE("call resolution over-approximates virtual dispatch") {
    SemanticModel model = model_of("class Base : IDisposable {\n"
                                   "    public void Dispose() { ...; }\n"
                                   "    public void Close() { ...; }\n"
                                   "}\n"
                                   "class Derived : Base {\n"
                                   "    public void Close() { ...; }\n"
                                   "}\n");
    auto targets = model.resolve_call("Base", "Close");
    REQUIRE(targets.size() == 2);
    CHECK(targets[0]->qualified_name() == "Base.Close");
    CHECK(targets[1]->qualified_name() == "Derived.Close");

    // single static target when no subtype overrides
    auto dispose = model.resolve_call("Derived", "Dispose");
    REQUIRE(dispose.size() == 1);
    CHECK(dispose[0]->qualified_name() == "Base.Dispose");

    // constructor calls resolve to the constructor
    SemanticModel wrapper = model_of("[MustCall(Dispose)]\n"
                                     "class SWrapper {\n"
                                     "    [Owning] Socket socket;\n"
                                     "    [MustCallAlias] public SWrapper([MustCallAlias] Socket s) "
                                     "{ this.socket = s; }\n"
                                     "    [EnsuresCalledMethods(socket, Dispose)]\n"
                                     "    public void Dispose() { socket.Dispose(); }\n"
                                     "}\n");
    auto ctors = wrapper.resolve_ctor("SWrapper");
    REQUIRE(ctors.size() == 1);
    CHECK(ctors[0]->is_constructor);
    CHECK(ctors[0]->owner == "SWrapper");
}

TEST_CASE("release methods derive from MustCall, IDisposable and element types") {
    SemanticModel model = model_of("[MustCall(Shutdown)]\n"
                                   "class Svc {\n"
                                   "    public void Shutdown() { ...; }\n"
                                   "}\n");
    CHECK(model.release_method("Svc") == "Shutdown");
    CHECK(model.release_method("Socket") == "Dispose");
    CHECK(model.release_method("List<Socket>") == "Dispose");
    CHECK(model.release_method("int") == "");
}

TEST_CASE("overlay entries attach attributes to named elements") {
    std::string text = "class Worker {\n"
                       "    Socket createSocket() {\n"
                       "        return new Socket(...);\n"
                       "    }\n"
                       "    void closeSocket(Socket s) {\n"
                       "        s.Dispose();\n"
                       "    }\n"
                       "}\n";
    SemanticModel model = model_of(text);
    auto parsed = parse_overlay(
        "fileName=\"test.moo\" and lineNo=\"2\" and elementType=\"ReturnType\" and "
        "elementName=\"createSocket\" and annotation=\"Owning\"\n"
        "fileName=\"test.moo\" and lineNo=\"5\" and elementType=\"Parameter\" and "
        "elementName=\"s\" and annotation=\"Owning\"\n");
    REQUIRE(parsed.errors.empty());
    auto problems = model.apply_overlay(parsed.entries);
    CHECK(problems.empty());
    CHECK(method_of(model, "Worker", "createSocket")->owning_return());
    CHECK(has_attribute(method_of(model, "Worker", "closeSocket")->params[0].attributes,
                        AttributeKind::Owning));
    CHECK(model.overlay_provenance().size() == 2);
    // overlay attributes count toward the attribute statistics
    CHECK(model.attribute_stats().at("Owning") == 2);
}

TEST_CASE("an empty overlay leaves the model unchanged") {
    SemanticModel model = model_of(kOwningFieldListing);
    auto before = model.attribute_stats();
    auto problems = model.apply_overlay({});
    CHECK(problems.empty());
    CHECK(model.attribute_stats() == before);
}

TEST_CASE("overlay entries that match nothing are binding errors") {
    SemanticModel model = model_of("class A {\n    void f(Socket s) { s.Dispose(); }\n}\n");
    auto parsed = parse_overlay("fileName=\"test.moo\" and lineNo=\"2\" and "
                                "elementType=\"Parameter\" and elementName=\"z\" and "
                                "annotation=\"Owning\"\n");
    REQUIRE(parsed.errors.empty());
    auto problems = model.apply_overlay(parsed.entries);
    REQUIRE(problems.size() == 1);
    CHECK(problems[0].message.find("no Parameter named 'z'") != std::string::npos);
}

TEST_CASE("overlay can annotate types and methods") {
    SemanticModel model = model_of("class Box {\n"
                                   "    [Owning] Socket socket;\n"
                                   "    public void Cleanup() { socket.Dispose(); }\n"
                                   "}\n");
    auto parsed = parse_overlay(
        "fileName=\"test.moo\" and lineNo=\"1\" and elementType=\"Type\" and "
        "elementName=\"Box\" and annotation=\"MustCall\" and args=\"Cleanup\"\n"
        "fileName=\"test.moo\" and lineNo=\"3\" and elementType=\"Method\" and "
        "elementName=\"Cleanup\" and annotation=\"EnsuresCalledMethods\" and "
        "args=\"socket,Dispose\"\n");
    REQUIRE(parsed.errors.empty());
    auto problems = model.apply_overlay(parsed.entries);
    CHECK(problems.empty());
    CHECK(has_attribute(model.find_type("Box")->attributes, AttributeKind::MustCall));
    CHECK(method_of(model, "Box", "Cleanup")->ensures_called() != nullptr);
    // RType was recomputed after the overlay
    CHECK(model.rtype().count("Box") == 1);
}

TEST_CASE("builtin library attributes stay out of the statistics") {
    SemanticModel model = model_of(kOwningFieldListing);
    auto stats = model.attribute_stats();
    CHECK(stats.at("MustCall") == 1);
    CHECK(stats.at("Owning") == 1);
    CHECK(stats.at("EnsuresCalledMethods") == 1);
    CHECK(stats.at("MustCallAlias") == 0); // StreamReader's builtin spec not counted
    CHECK(stats.at("CreateMustCallFor") == 0);
}
