// Copyright 2026 The gecval Authors. All Rights Reserved.
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

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "gecval/corpus.hpp"

namespace gecval {

using BigCount = boost::multiprecision::cpp_int;

/// Number of distinct corrections obtainable by combining the sentence's
/// annotations edit by edit.
///
/// Edits are pooled across annotations (type and annotator ignored) and
/// grouped into connected components of the overlap relation. An isolated
/// edit that every annotation makes is forced; any other isolated edit may be
/// taken or left (factor 2). A component of two or more edits contributes the
/// number of distinct token sequences it can realize over its span, where a
/// realization applies a pairwise non-overlapping subset of the component.
BigCount count_imeasure_refs(const SentenceRecord& record);

}  // namespace gecval
