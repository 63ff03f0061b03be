// Copyright 2026 The gameform Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GAMEFORM_OPERATORS_H_
#define GAMEFORM_OPERATORS_H_

#include <optional>
#include <string_view>

namespace gameform {

// The dialect's fixed operator table. There are no user-defined operators.
enum class OpType { kXfx, kXfy, kYfx, kFy, kFx };

struct OpDef {
  int priority;
  OpType type;

  int LeftMax() const { return type == OpType::kYfx ? priority : priority - 1; }
  int RightMax() const {
    return (type == OpType::kXfy || type == OpType::kFy) ? priority
                                                         : priority - 1;
  }
};

inline constexpr int kMaxPriority = 1200;
inline constexpr int kArgPriority = 999;

std::optional<OpDef> InfixOp(std::string_view name);
std::optional<OpDef> PrefixOp(std::string_view name);
bool IsOperatorAtom(std::string_view name);

}  // namespace gameform

#endif  // GAMEFORM_OPERATORS_H_
