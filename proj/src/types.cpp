// Copyright 2026 The graphmart Authors.
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

#include "graphmart/types.hpp"

#include <algorithm>

namespace graphmart {

std::string TripleAtom::canonical() const {
  std::string out;
  out.reserve(subject.size() + predicate.size() + object.size() + 4);
  out += subject;
  out += ' ';
  out += predicate;
  out += ' ';
  if (object_is_literal) {
    out += '"';
    out += object;
    out += '"';
  } else {
    out += object;
  }
  return out;
}

std::vector<TripleAtom> AnswerRow::required_triples() const {
  std::vector<TripleAtom> out;
  out.reserve(matches.size());
  for (const PatternMatch& m : matches) {
    if (std::find(out.begin(), out.end(), m.triple) == out.end()) out.push_back(m.triple);
  }
  return out;
}

}  // namespace graphmart
