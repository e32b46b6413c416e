#ifndef MUSTCALL_TEST_UTIL_HPP
#define MUSTCALL_TEST_UTIL_HPP

#include <memory>
#include <string>
#include <vector>

#include "mustcall/model.hpp"
#include "mustcall/parser.hpp"

namespace mustcall::test {

inline SourceUnit unit(const std::string& text, const std::string& path = "test.moo") {
    return SourceUnit{path, text};
}

inline SemanticModel model_of(const std::vector<std::string>& texts) {
    std::vector<std::unique_ptr<CompilationUnit>> units;
    int i = 0;
    for (const auto& text : texts) {
        std::string path = i == 0 ? "test.moo" : "test" + std::to_string(i) + ".moo";
        units.push_back(parse_unit(SourceUnit{path, text}));
        i++;
    }
    return build_model(std::move(units));
}

inline SemanticModel model_of(const std::string& text) {
    return model_of(std::vector<std::string>{text});
}

inline const MethodInfo* method_of(const SemanticModel& model, const std::string& type,
                                   const std::string& name) {
    const TypeInfo* t = model.find_type(type);
    return t ? t->find_method(name) : nullptr;
}

} // namespace mustcall::test

#endif
