#ifndef MUSTCALL_SOURCE_HPP
#define MUSTCALL_SOURCE_HPP

#include <stdexcept>
#include <string>

namespace mustcall {

/// A position in a source file. Lines and columns are 1-based.
struct Span {
    std::string file;
    int line = 0;
    int column = 0;

    bool operator==(const Span& other) const = default;

    std::string str() const {
        return file + ":" + std::to_string(line) + ":" + std::to_string(column);
    }
};

/// One input file handed to the checker. `path` identifies the unit in
/// diagnostics and must be unique per run.
struct SourceUnit {
    std::string path;
    std::string text;
};

/// A parse/resolution/overlay problem tied to a source position.
struct Diagnostic {
    std::string file;
    int line = 0;
    int column = 0;
    std::string message;

    std::string str() const {
        return file + ":" + std::to_string(line) + ":" + std::to_string(column) +
               ": error: " + message;
    }
};

/// Thrown by the lexer and parser; the driver converts it into a Diagnostic.
class ParseError : public std::runtime_error {
  public:
    explicit ParseError(Diagnostic diag)
        : std::runtime_error(diag.str()), diag_(std::move(diag)) {}

    const Diagnostic& diag() const { return diag_; }

  private:
    Diagnostic diag_;
};

} // namespace mustcall

#endif
