/* The copyright in this software is being made available under the BSD
 * License, included below. This software may be subject to other third party
 * and contributor rights, including patent rights, and no such rights are
 * granted under this license.
 *
 * Copyright (c) 2026, The cupart Authors
 * All rights reserved.
 *
 * Redistribution and use in source and binary forms, with or without
 * modification, are permitted provided that the following conditions are met:
 *
 *  * Redistributions of source code must retain the above copyright notice,
 *    this list of conditions and the following disclaimer.
 *  * Redistributions in binary form must reproduce the above copyright notice,
 *    this list of conditions and the following disclaimer in the documentation
 *    and/or other materials provided with the distribution.
 *  * Neither the name of the copyright holder nor the names of its contributors
 *    may be used to endorse or promote products derived from this software
 *    without specific prior written permission.
 *
 * THIS SOFTWARE IS PROVIDED BY THE COPYRIGHT HOLDERS AND CONTRIBUTORS "AS IS"
 * AND ANY EXPRESS OR IMPLIED WARRANTIES, INCLUDING, BUT NOT LIMITED TO, THE
 * IMPLIED WARRANTIES OF MERCHANTABILITY AND FITNESS FOR A PARTICULAR PURPOSE
 * ARE DISCLAIMED. IN NO EVENT SHALL THE COPYRIGHT HOLDER OR CONTRIBUTORS
 * BE LIABLE FOR ANY DIRECT, INDIRECT, INCIDENTAL, SPECIAL, EXEMPLARY, OR
 * CONSEQUENTIAL DAMAGES (INCLUDING, BUT NOT LIMITED TO, PROCUREMENT OF
 * SUBSTITUTE GOODS OR SERVICES; LOSS OF USE, DATA, OR PROFITS; OR BUSINESS
 * INTERRUPTION) HOWEVER CAUSED AND ON ANY THEORY OF LIABILITY, WHETHER IN
 * CONTRACT, STRICT LIABILITY, OR TORT (INCLUDING NEGLIGENCE OR OTHERWISE)
 * ARISING IN ANY WAY OUT OF THE USE OF THIS SOFTWARE, EVEN IF ADVISED OF
 * THE POSSIBILITY OF SUCH DAMAGE.
 */

/** \file     Metrics.hpp
    \brief    binary confusion counts (class 1 = split)
*/

#pragma once

#include <cstdint>

namespace cupart
{

struct Confusion
{
  uint64_t trueNonSplit  = 0; // label 0, predicted 0
  uint64_t falseSplit    = 0; // label 0, predicted 1
  uint64_t falseNonSplit = 0; // label 1, predicted 0
  uint64_t trueSplit     = 0; // label 1, predicted 1

  void add( bool label, bool predicted )
  {
    if( label )
    {
      ( predicted ? trueSplit : falseNonSplit )++;
    }
    else
    {
      ( predicted ? falseSplit : trueNonSplit )++;
    }
  }

  uint64_t total() const { return trueNonSplit + falseSplit + falseNonSplit + trueSplit; }
  uint64_t nonSplitCount() const { return trueNonSplit + falseSplit; }
  uint64_t splitCount() const { return falseNonSplit + trueSplit; }

  double accuracy() const { return ratio( trueNonSplit + trueSplit, total() ); }
  /// Recall of class 0 / class 1.
  double nonSplitRecall() const { return ratio( trueNonSplit, nonSplitCount() ); }
  double splitRecall() const { return ratio( trueSplit, splitCount() ); }
  double splitPrecision() const { return ratio( trueSplit, trueSplit + falseSplit ); }
  double nonSplitPrecision() const { return ratio( trueNonSplit, trueNonSplit + falseNonSplit ); }
  /// Accuracy of always predicting the more frequent label.
  double majorityBaseline() const
  {
    return ratio( nonSplitCount() > splitCount() ? nonSplitCount() : splitCount(), total() );
  }
  bool minorityIsSplit() const { return splitCount() < nonSplitCount(); }
  double minorityRecall() const { return minorityIsSplit() ? splitRecall() : nonSplitRecall(); }

  Confusion& operator+=( const Confusion& o )
  {
    trueNonSplit += o.trueNonSplit;
    falseSplit += o.falseSplit;
    falseNonSplit += o.falseNonSplit;
    trueSplit += o.trueSplit;
    return *this;
  }

private:
  static double ratio( uint64_t a, uint64_t b ) { return b ? static_cast<double>( a ) / static_cast<double>( b ) : 0.0; }
};

} // namespace cupart
