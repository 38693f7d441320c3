#pragma once

#include <stdexcept>
#include <string>

namespace nomdiag {

// Every library failure derives from Error; `kind()` is the stable tag the CLI prints.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define NOMDIAG_ERROR(Name)                                                  \
    class Name : public Error {                                              \
    public:                                                                  \
        explicit Name(const std::string& what) : Error(#Name, what) {}       \
    }

NOMDIAG_ERROR(ParseError);
NOMDIAG_ERROR(UnknownGenerator);
NOMDIAG_ERROR(UnsupportedGenerator);
NOMDIAG_ERROR(SeqMismatch);
NOMDIAG_ERROR(OverlapError);
NOMDIAG_ERROR(DuplicateName);
NOMDIAG_ERROR(ArityMismatch);
NOMDIAG_ERROR(TypeMismatch);
NOMDIAG_ERROR(InterfaceMismatch);
NOMDIAG_ERROR(KindMismatch);
NOMDIAG_ERROR(NameNotInDomain);
NOMDIAG_ERROR(NotAPermutationTerm);
NOMDIAG_ERROR(NoMatch);
NOMDIAG_ERROR(IllTypedResult);
NOMDIAG_ERROR(TypeViolation);

#undef NOMDIAG_ERROR

} // namespace nomdiag
