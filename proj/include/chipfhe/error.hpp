// Copyright (C) 2026 chipfhe contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace chipfhe {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define CHIPFHE_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                        \
   public:                                                           \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

CHIPFHE_DEFINE_ERROR(NoPrimeFound);
CHIPFHE_DEFINE_ERROR(DomainError);
CHIPFHE_DEFINE_ERROR(PlanMismatch);
CHIPFHE_DEFINE_ERROR(InvalidGalois);
CHIPFHE_DEFINE_ERROR(ModulusMismatch);
CHIPFHE_DEFINE_ERROR(DomainMismatch);
CHIPFHE_DEFINE_ERROR(LevelMismatch);
CHIPFHE_DEFINE_ERROR(ScaleMismatch);
CHIPFHE_DEFINE_ERROR(KeyLevelTooLow);
CHIPFHE_DEFINE_ERROR(LevelExhausted);
CHIPFHE_DEFINE_ERROR(SlotOverflow);
CHIPFHE_DEFINE_ERROR(MissingRotationKey);
CHIPFHE_DEFINE_ERROR(ConfigError);
CHIPFHE_DEFINE_ERROR(DeadlockDetected);
CHIPFHE_DEFINE_ERROR(UnsupportedConfig);
CHIPFHE_DEFINE_ERROR(FormatError);

#undef CHIPFHE_DEFINE_ERROR

}  // namespace chipfhe
