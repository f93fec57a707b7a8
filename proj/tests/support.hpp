#pragma once

#include <gtest/gtest.h>

#include "forgebench/error.hpp"
#include "synthetic.hpp"

namespace fbtest {

template <typename F>
fb::ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const fb::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no forgebench::Error thrown";
  return static_cast<fb::ErrorCode>(-1);
}

}  // namespace fbtest
