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

/** \file     Indicator.hpp
    \brief    luma range / standard deviation indicators and the range early-termination filter
*/

#pragma once

#include "cupart/MediaIo.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace cupart
{

/// Per-size range thresholds; a CU whose range is strictly below its threshold is non-split.
struct EarlyTermThresholds
{
  int t64 = 20;
  int t32 = 25;
  int t16 = 30;

  int forSize( int size ) const;
};

enum class FilterDecision
{
  Terminate,
  Pass
};

/// max - min of the samples, in [0, 255].
int lumaRange( const LumaBlock& block );

/// Population standard deviation of the samples.
double lumaStdDev( const LumaBlock& block );

/// Throws ShapeError for 8x8 blocks, which have no split decision.
FilterDecision earlyTerminate( const LumaBlock& block, const EarlyTermThresholds& thresholds );

enum class Indicator
{
  Range,
  StdDev
};

const char* indicatorName( Indicator indicator );
double      defaultBinWidth( Indicator indicator );

/// Per-class histograms of one indicator for one CU size.
struct IndicatorStats
{
  int                   cuSize    = 0;
  Indicator             indicator = Indicator::Range;
  double                binWidth  = 1.0;
  std::vector<uint64_t> nonSplitHistogram;
  std::vector<uint64_t> splitHistogram;

  size_t binCount() const { return nonSplitHistogram.size(); }
  double binLow( size_t bin ) const { return static_cast<double>( bin ) * binWidth; }
  double binHigh( size_t bin ) const { return static_cast<double>( bin + 1 ) * binWidth; }
  double nonSplitDensity( size_t bin ) const;
  double splitDensity( size_t bin ) const;
};

/// All blocks must share one size and both label classes must be present.
IndicatorStats buildDensity( std::span<const LabeledBlock> blocks, Indicator indicator, double binWidth );

/// Columns: bin_lo,bin_hi,density_non_split,density_split
void writeDensityCsv( std::ostream& out, const IndicatorStats& stats );

} // namespace cupart
