#pragma once

#include <stdexcept>
#include <string>

namespace susmine {

/// Exit-code class of an error: data problems versus environment/usage problems.
enum class ErrorClass { data = 1, environment = 2 };

class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message, ErrorClass cls = ErrorClass::data)
        : std::runtime_error(kind + ": " + message), kind_(std::move(kind)), message_(message), class_(cls)
    {
    }

    const std::string& kind() const noexcept { return kind_; }
    const std::string& message() const noexcept { return message_; }
    ErrorClass error_class() const noexcept { return class_; }
    int exit_code() const noexcept { return static_cast<int>(class_); }

private:
    std::string kind_;
    std::string message_;
    ErrorClass class_;
};

#define SUSMINE_DEFINE_ERROR(Name, Cls)                                                    \
    class Name : public Error {                                                            \
    public:                                                                                \
        explicit Name(const std::string& message) : Error(#Name, message, Cls) {}          \
    };

SUSMINE_DEFINE_ERROR(SyntaxError, ErrorClass::environment)
SUSMINE_DEFINE_ERROR(IoError, ErrorClass::environment)
SUSMINE_DEFINE_ERROR(SchemaError, ErrorClass::data)
SUSMINE_DEFINE_ERROR(IntegrityError, ErrorClass::data)
SUSMINE_DEFINE_ERROR(UnknownComponent, ErrorClass::data)
SUSMINE_DEFINE_ERROR(UnknownScope, ErrorClass::data)
SUSMINE_DEFINE_ERROR(UnknownUnit, ErrorClass::data)
SUSMINE_DEFINE_ERROR(NoConversionPath, ErrorClass::data)
SUSMINE_DEFINE_ERROR(InconsistentRegistry, ErrorClass::data)
SUSMINE_DEFINE_ERROR(UncharacterizedFlow, ErrorClass::data)
SUSMINE_DEFINE_ERROR(UnitMismatch, ErrorClass::data)
SUSMINE_DEFINE_ERROR(ZeroOutput, ErrorClass::data)
SUSMINE_DEFINE_ERROR(NoTargets, ErrorClass::data)
SUSMINE_DEFINE_ERROR(MissingAttribute, ErrorClass::data)
SUSMINE_DEFINE_ERROR(DuplicateSource, ErrorClass::data)
SUSMINE_DEFINE_ERROR(LogMismatch, ErrorClass::data)
SUSMINE_DEFINE_ERROR(MissingFixture, ErrorClass::environment)
SUSMINE_DEFINE_ERROR(DecimalError, ErrorClass::data)

#undef SUSMINE_DEFINE_ERROR

}  // namespace susmine
