#pragma once

#include <stdexcept>
#include <string>

namespace steklov
{
/// Base class of every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

#define STEKLOV_DEFINE_ERROR(Name)     \
    class Name : public Error          \
    {                                  \
    public:                            \
        using Error::Error;            \
    }

STEKLOV_DEFINE_ERROR(ParameterError);
STEKLOV_DEFINE_ERROR(ValidationError);
STEKLOV_DEFINE_ERROR(TaggingError);
STEKLOV_DEFINE_ERROR(AssemblyError);
STEKLOV_DEFINE_ERROR(EmptyBoundaryError);
STEKLOV_DEFINE_ERROR(FactorizationError);
STEKLOV_DEFINE_ERROR(PreconditionError);
STEKLOV_DEFINE_ERROR(ResolutionError);
STEKLOV_DEFINE_ERROR(EmbeddingError);
STEKLOV_DEFINE_ERROR(GeometryError);
STEKLOV_DEFINE_ERROR(DegenerateInputError);
STEKLOV_DEFINE_ERROR(UnsupportedCaseError);
STEKLOV_DEFINE_ERROR(IoError);

#undef STEKLOV_DEFINE_ERROR

} // namespace steklov
