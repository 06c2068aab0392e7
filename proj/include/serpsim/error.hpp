#pragma once

#include <stdexcept>
#include <string>

namespace serpsim {

// Base of every data error the library raises. The CLI maps these to exit
// code 2; anything else escaping is a bug.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SERPSIM_DEFINE_ERROR(Name)          \
  class Name : public Error {               \
   public:                                  \
    using Error::Error;                     \
  }

SERPSIM_DEFINE_ERROR(ParseError);
SERPSIM_DEFINE_ERROR(SchemaError);
SERPSIM_DEFINE_ERROR(DuplicateKeyError);
SERPSIM_DEFINE_ERROR(MissingDocument);
SERPSIM_DEFINE_ERROR(EmptyHistogram);
SERPSIM_DEFINE_ERROR(DuplicateElement);
SERPSIM_DEFINE_ERROR(NotPermutation);
SERPSIM_DEFINE_ERROR(EmptyMarket);
SERPSIM_DEFINE_ERROR(InvalidSpec);
SERPSIM_DEFINE_ERROR(InvalidProfile);
SERPSIM_DEFINE_ERROR(NoPairs);
SERPSIM_DEFINE_ERROR(NoJudgedQueries);
SERPSIM_DEFINE_ERROR(IoError);

#undef SERPSIM_DEFINE_ERROR

}  // namespace serpsim
