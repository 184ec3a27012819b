// Copyright 2026 The chv-enrich Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <string_view>

namespace chvenrich {

// One pass of the Porter (1980) suffix stripper over a lowercase ASCII word,
// extended for clinical Greek/Latin endings: "-os" is left intact and
// "-sis"/"-tis" lose their "is" when the remaining stem has measure > 1
// (stenosis -> stenos, arthritis -> arthrit).
std::string porter_stem_pass(std::string_view word);

// Repeats porter_stem_pass until a fixed point, so stem(stem(w)) == stem(w).
std::string stem(std::string_view word);

}  // namespace chvenrich
