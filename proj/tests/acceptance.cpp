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

/** \file     acceptance.cpp
    \brief    end-to-end acceptance checks, one PASS/FAIL line per criterion
*/

#include "cupart/AdaptiveLoss.hpp"
#include "cupart/CnnModel.hpp"
#include "cupart/Error.hpp"
#include "cupart/Evalkit.hpp"
#include "cupart/Indicator.hpp"
#include "cupart/MediaIo.hpp"
#include "cupart/Pipeline.hpp"
#include "cupart/RdoOracle.hpp"
#include "cupart/Synthetic.hpp"
#include "cupart/Trainer.hpp"
#include "support/IntraReference.hpp"
#include "support/NnReference.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

using namespace cupart;
namespace fs = std::filesystem;

namespace
{

// ---- tolerances and limits -------------------------------------------------

constexpr double kExactRelTol      = 1e-12;
constexpr double kConvergenceTol   = 0.01;
constexpr int    kConvergenceSteps = 10;
constexpr double kGradEps          = 1e-4;
constexpr double kGradRelTol       = 1e-3;
constexpr int    kGradProbes       = 100;
constexpr double kSoftmaxSumTol    = 1e-6;
constexpr int    kOracleBlocks     = 1000;
constexpr int    kMonotoneFrames   = 20;
constexpr double kBaselineMargin   = 0.10;
constexpr int    kMinDeskFrames    = 50;
constexpr double kSmoothEtFloor    = 0.5;

constexpr double kRuntimeLimit[9] = { 0, 1.0, 60.0, 10.0, 10.0, 120.0, 1800.0, 300.0, 600.0 };

struct Context
{
  fs::path dataDir;
  fs::path modelDir;
  int      qp = 32;
};

struct Outcome
{
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  void require( bool ok, const std::string& what )
  {
    if( !ok )
    {
      failures.push_back( what );
    }
  }
  void note( const std::string& text ) { notes.push_back( text ); }
};

std::string fmt( const char* format, double a, double b = 0.0, double c = 0.0, double d = 0.0 )
{
  char buf[256];
  std::snprintf( buf, sizeof( buf ), format, a, b, c, d );
  return buf;
}

bool relClose( double got, double want, double tol = kExactRelTol )
{
  return std::fabs( got - want ) <= tol * std::max( std::fabs( want ), 1e-300 );
}

std::vector<Frame> deskFrames( const Context& ctx )
{
  const std::vector<fs::path> inputs{ ctx.dataDir / "desk" };
  return loadCorpus( inputs );
}

// ---- 1: loss and weight update ----------------------------------------------

void criterionLoss( const Context&, Outcome& o )
{
  LossWeights w;
  w.alpha0 = 0.0;
  w.alpha1 = 2.0;
  o.require( relClose( weightedLoss( std::vector<double>{ 0.5 }, std::vector<uint8_t>{ 1 }, w ), 2.0 * std::log( 2.0 ) ),
             "N=1, y=1, p=0.5, alpha1=2 should give 2 ln 2" );
  o.require( weightedLoss( std::vector<double>{ 1.0 - 1e-15 }, std::vector<uint8_t>{ 1 }, {} ) < 1e-12,
             "perfect prediction should give a vanishing loss" );

  Rng                  rng( 11 );
  std::vector<double>  p( 256 );
  std::vector<uint8_t> y( 256 );
  for( size_t i = 0; i < p.size(); i++ )
  {
    p[i] = rng.uniform();
    y[i] = static_cast<uint8_t>( rng.below( 2 ) );
  }
  o.require( weightedLoss( p, y, {} ) == binaryCrossEntropy( p, y ), "unit weights should equal cross-entropy exactly" );

  o.require( relClose( lossGradient( std::vector<double>{ 0.5 }, std::vector<uint8_t>{ 1 }, {} )[0], -2.0 ),
             "gradient at y=1, p=0.5 should be -2" );
  o.require( relClose( lossGradient( std::vector<double>{ 0.5 }, std::vector<uint8_t>{ 0 }, {} )[0], 2.0 ),
             "gradient at y=0, p=0.5 should be +2" );

  LossWeights frozen;
  frozen.alpha0 = 0.8;
  frozen.alpha1 = 1.2;
  frozen.eta    = 0.0;
  const auto f  = updateWeights( frozen, 1234, 5 ).weights;
  o.require( f.alpha0 == 0.8 && f.alpha1 == 1.2, "eta=0 should leave the weights unchanged" );

  LossWeights full;
  full.eta     = 1.0;
  const auto u = updateWeights( full, 300, 100 ).weights;
  o.require( relClose( u.alpha0, 0.5 ) && relClose( u.alpha1, 1.5 ), "ratio 1, eta 1, 300/100 should give 0.5/1.5" );

  LossWeights fixedPoint = LossWeights{}.withRatio( 3.0 );
  const auto  fp         = updateWeights( fixedPoint, 300, 100 ).weights;
  o.require( relClose( fp.alpha0, fixedPoint.alpha0 ) && relClose( fp.alpha1, fixedPoint.alpha1 ),
             "ratio already n0/n1 should be a fixed point" );

  // class ratios of the desk corpus and of the original training set
  const std::pair<uint64_t, uint64_t> counts[] = { { 508105, 1667895 }, { 8000000, 10256410 }, { 29467909, 5348091 },
                                                    { 64, 320 },         { 596, 940 },          { 4421, 1723 } };
  int worst = 0;
  for( const auto& [n0, n1]: counts )
  {
    const double target = static_cast<double>( n0 ) / static_cast<double>( n1 );
    LossWeights  lw;
    lw.eta     = 0.5;
    int needed = -1;
    for( int k = 1; k <= kConvergenceSteps; k++ )
    {
      lw = updateWeights( lw, n0, n1 ).weights;
      o.require( std::fabs( lw.alpha0 + lw.alpha1 - 2.0 ) <= kExactRelTol && lw.alpha0 > 0 && lw.alpha1 > 0,
                 "weights must stay positive and sum to 2" );
      if( needed < 0 && std::fabs( lw.ratio() - target ) <= kConvergenceTol * target )
      {
        needed = k;
      }
    }
    o.require( needed > 0, fmt( "ratio did not reach %.4g within 1%% in 10 updates", target ) );
    worst = std::max( worst, needed );
  }
  o.note( fmt( "slowest convergence %.0f updates", worst ) );
}

// ---- 2: gradients -------------------------------------------------------------

double dot( const Tensor& a, const Tensor& b )
{
  return std::inner_product( a.values().begin(), a.values().end(), b.values().begin(), 0.0 );
}

Tensor spreadTensor( std::vector<int> shape, Rng& rng )
{
  Tensor              t( std::move( shape ) );
  std::vector<size_t> order( t.size() );
  std::iota( order.begin(), order.end(), 0 );
  for( size_t i = order.size(); i > 1; i-- )
  {
    std::swap( order[i - 1], order[rng.below( i )] );
  }
  for( size_t i = 0; i < order.size(); i++ )
  {
    t[order[i]] = 0.01 * static_cast<double>( i ) - 0.005 * static_cast<double>( order.size() );
  }
  return t;
}

void criterionGradients( const Context&, Outcome& o )
{
  using reference::checkGradient;
  using reference::randomTensor;
  Rng  rng( 2024 );
  auto none = [] { return std::vector<uint8_t>{}; };

  std::vector<std::pair<std::string, reference::GradCheckResult>> results;
  auto merge = []( reference::GradCheckResult& into, const reference::GradCheckResult& r ) {
    into.probes += r.probes;
    into.skipped += r.skipped;
    into.maxError = std::max( into.maxError, r.maxError );
  };

  {
    reference::GradCheckResult total;
    ConvLayer conv( { LayerKind::Conv, 3, 3, 1, Padding::Same, 3, 6 } );
    conv.initialize( rng );
    Tensor       x = randomTensor( { 2, 3, 6, 6 }, rng );
    const Tensor g = randomTensor( conv.outputShape( x.shape() ), rng );
    conv.forwardTrain( x );
    const Tensor dx      = conv.backward( g );
    const Tensor gw      = conv.weightGrad(), gb = conv.biasGrad();
    auto         loss    = [&] { return dot( conv.forwardTrain( x ), g ); };
    auto         pattern = [&] {
      std::vector<uint8_t> p;
      conv.appendReluPattern( p );
      return p;
    };
    merge( total, checkGradient( conv.weights(), gw, loss, pattern, kGradProbes, rng, kGradEps ) );
    merge( total, checkGradient( conv.bias(), gb, loss, pattern, 6, rng, kGradEps ) );
    merge( total, checkGradient( x, dx, loss, pattern, kGradProbes, rng, kGradEps ) );
    results.emplace_back( "conv", total );
  }
  for( const LayerKind kind: { LayerKind::MaxPool, LayerKind::AvgPool } )
  {
    reference::GradCheckResult total;
    for( const LayerSpec& spec: { LayerSpec{ kind, 3, 3, 1, Padding::Same, 3, 3 }, LayerSpec{ kind, 2, 2, 2, Padding::Valid, 3, 3 },
                                  LayerSpec{ kind, 8, 8, 1, Padding::Valid, 3, 3 } } )
    {
      PoolLayer    pool( spec );
      Tensor       x = spreadTensor( { 2, 3, 8, 8 }, rng );
      const Tensor g = randomTensor( pool.outputShape( x.shape() ), rng );
      pool.forwardTrain( x );
      const Tensor dx = pool.backward( g );
      merge( total, checkGradient( x, dx, [&] { return dot( pool.forward( x ), g ); }, none, kGradProbes, rng, kGradEps ) );
    }
    results.emplace_back( layerKindName( kind ), total );
  }
  {
    reference::GradCheckResult total;
    InceptionLayer inception( InceptionConfig{ 4, 4, 3, 5, 2, 3, 2 } );
    inception.initialize( rng );
    Tensor       x = spreadTensor( { 1, 4, 6, 6 }, rng );
    const Tensor g = randomTensor( inception.outputShape( x.shape() ), rng );
    inception.forwardTrain( x );
    const Tensor dx      = inception.backward( g );
    auto         loss    = [&] { return dot( inception.forwardTrain( x ), g ); };
    auto         pattern = [&] {
      std::vector<uint8_t> p;
      inception.appendActivationPattern( p );
      return p;
    };
    std::vector<ParamRef> params;
    inception.collectParameters( params, "inception" );
    for( auto& p: params )
    {
      const Tensor analytic = *p.grad;
      merge( total, checkGradient( *p.value, analytic, loss, pattern, 17, rng, kGradEps ) );
    }
    merge( total, checkGradient( x, dx, loss, pattern, kGradProbes, rng, kGradEps ) );
    results.emplace_back( "inception", total );
  }
  {
    reference::GradCheckResult total;
    DenseLayer dense( 20, 2 );
    dense.initialize( rng );
    Tensor       x = randomTensor( { 4, 20 }, rng );
    const Tensor g = randomTensor( { 4, 2 }, rng );
    dense.forwardTrain( x );
    const Tensor dx   = dense.backward( g );
    const Tensor gw   = dense.weightGrad(), gb = dense.biasGrad();
    auto         loss = [&] { return dot( dense.forward( x ), g ); };
    merge( total, checkGradient( dense.weights(), gw, loss, none, kGradProbes, rng, kGradEps ) );
    merge( total, checkGradient( dense.bias(), gb, loss, none, 4, rng, kGradEps ) );
    merge( total, checkGradient( x, dx, loss, none, kGradProbes, rng, kGradEps ) );
    results.emplace_back( "dense", total );
  }
  {
    SoftmaxLayer softmax( 2 );
    Tensor       logits = randomTensor( { 64, 2 }, rng, -3, 3 );
    const Tensor g      = randomTensor( { 64, 2 }, rng );
    softmax.forwardTrain( logits );
    const Tensor dl = softmax.backward( g );
    results.emplace_back( "softmax", checkGradient( logits, dl, [&] { return dot( softmax.forward( logits ), g ); }, none,
                                                    kGradProbes, rng, kGradEps ) );
  }
  {
    std::vector<double>  p( 128 );
    std::vector<uint8_t> y( 128 );
    for( size_t i = 0; i < p.size(); i++ )
    {
      p[i] = rng.uniform( 0.02, 0.98 );
      y[i] = static_cast<uint8_t>( rng.below( 2 ) );
    }
    LossWeights w = LossWeights{}.withRatio( 2.7 );
    const auto  g = lossGradient( p, y, w );
    Tensor      pt( { 128 }, p );
    const Tensor gt( { 128 }, g );
    auto loss = [&] {
      return weightedLoss( std::vector<double>( pt.values().begin(), pt.values().end() ), y, w );
    };
    results.emplace_back( "weighted loss", checkGradient( pt, gt, loss, none, kGradProbes, rng, kGradEps ) );
  }

  std::string summary;
  for( const auto& [name, r]: results )
  {
    o.require( r.probes >= kGradProbes, name + ": fewer than 100 probes" );
    o.require( r.maxError < kGradRelTol, name + fmt( ": max relative error %.3g", r.maxError ) );
    summary += ( summary.empty() ? "" : ", " ) + name + fmt( " %.1e", r.maxError );
  }
  o.note( summary );
}

// ---- 3: topology shapes -------------------------------------------------------

void criterionShapes( const Context&, Outcome& o )
{
  Rng rng( 3 );
  for( const int size: { 64, 32, 16 } )
  {
    const auto model = buildTopology( size, 7 );
    const auto trace = model.shapeTrace( 2 );
    bool       head  = false;
    for( size_t i = 0; i < model.layers().size(); i++ )
    {
      if( layerSpec( model.layers()[i] ).kind == LayerKind::AvgPool )
      {
        head = trace[i] == std::vector<int>{ 2, 256, 8, 8 };
      }
    }
    o.require( head, std::to_string( size ) + ": head input is not 8x8x256" );
    o.require( trace.back() == std::vector<int>{ 2, 2 }, std::to_string( size ) + ": output is not 2-way" );

    std::vector<LumaBlock> blocks;
    for( int i = 0; i < 3; i++ )
    {
      std::vector<uint8_t> s( static_cast<size_t>( size ) * size );
      for( auto& v: s )
      {
        v = static_cast<uint8_t>( rng.below( 256 ) );
      }
      blocks.push_back( makeBlock( size, s ) );
    }
    blocks.push_back( makeConstantBlock( size, 0 ) );
    blocks.push_back( makeConstantBlock( size, 255 ) );
    std::vector<const LumaBlock*> ptrs;
    for( const auto& b: blocks )
    {
      ptrs.push_back( &b );
    }
    const Tensor input = makeInputBatch( ptrs, size );
    o.require( model.features( input ).shape() == std::vector<int>{ 5, 256, 8, 8 },
               std::to_string( size ) + ": measured pre-head activation is not 8x8x256" );
    const Tensor p = model.forward( input );
    for( size_t n = 0; n < blocks.size(); n++ )
    {
      const double a = p[2 * n], b = p[2 * n + 1];
      o.require( a > 0 && a < 1 && b > 0 && b < 1 && std::fabs( a + b - 1.0 ) <= kSoftmaxSumTol,
                 std::to_string( size ) + ": softmax output not normalized" );
    }
  }
}

// ---- 4: filter semantics --------------------------------------------------------

LumaBlock blockWithRange( int size, int range, Rng& rng )
{
  const int            low = static_cast<int>( rng.below( static_cast<uint64_t>( 256 - range ) ) );
  std::vector<uint8_t> s( static_cast<size_t>( size ) * size );
  for( auto& v: s )
  {
    v = static_cast<uint8_t>( low + static_cast<int>( rng.below( static_cast<uint64_t>( range + 1 ) ) ) );
  }
  // pin both extremes
  const size_t a = rng.below( s.size() );
  size_t       b = rng.below( s.size() );
  while( b == a )
  {
    b = rng.below( s.size() );
  }
  s[a] = static_cast<uint8_t>( low );
  s[b] = static_cast<uint8_t>( low + range );
  return makeBlock( size, s );
}

void criterionFilter( const Context&, Outcome& o )
{
  Rng                              rng( 4 );
  std::vector<EarlyTermThresholds> thresholdSets{ {} };
  for( int i = 0; i < 3; i++ )
  {
    thresholdSets.push_back( { static_cast<int>( 2 + rng.below( 250 ) ), static_cast<int>( 2 + rng.below( 250 ) ),
                               static_cast<int>( 2 + rng.below( 250 ) ) } );
  }
  size_t checked = 0;
  for( const auto& t: thresholdSets )
  {
    for( const int size: { 64, 32, 16 } )
    {
      const int threshold = t.forSize( size );
      for( int range = 0; range <= 255; range++ )
      {
        const int reps = std::abs( range - threshold ) <= 2 ? 20 : 1;
        for( int k = 0; k < reps; k++ )
        {
          const auto block = blockWithRange( size, range, rng );
          const bool stop  = earlyTerminate( block, t ) == FilterDecision::Terminate;
          if( lumaRange( block ) != range || stop != ( range < threshold ) )
          {
            o.require( false, fmt( "size %.0f range %.0f threshold %.0f", size, range, threshold ) );
          }
          checked++;
        }
      }
    }
  }
  o.note( std::to_string( checked ) + " blocks" );

  ModelSet models;
  models.cu64 = buildTopology( 64, 1 );
  models.cu32 = buildTopology( 32, 1 );
  models.cu16 = buildTopology( 16, 1 );
  const CnnClassifier cnn( std::move( models ) );
  for( const int level: { 0, 17, 128, 200, 255 } )
  {
    const auto d = decideFrame( makeConstantFrame( 256, 192, static_cast<uint8_t>( level ) ), cnn, {} );
    o.require( d.classifierCalls == 0, "constant frame consulted the classifier" );
    o.require( d.earlyTerminatedFraction() == 1.0, "constant frame was not fully early-terminated" );
  }
}

// ---- 5: oracle soundness -----------------------------------------------------------

bool nodesAgree( const RdNode& node, const reference::CostTable& table, uint64_t& nodes )
{
  if( node.size == kMinCuSize )
  {
    return true;
  }
  nodes++;
  const auto   splits    = table.splitPartitionCosts( node.size, node.origin.x, node.origin.y );
  const double bestSplit = *std::min_element( splits.begin(), splits.end() );
  bool         ok        = node.split == ( bestSplit < table.whole( node.size, node.origin.x, node.origin.y ) );
  for( const auto& c: node.children )
  {
    ok = nodesAgree( c, table, nodes ) && ok;
  }
  return ok;
}

void criterionOracle( const Context& ctx, Outcome& o )
{
  const auto frames = deskFrames( ctx );
  Rng        rng( 5 );
  uint64_t   nodes = 0, mismatched = 0;
  for( int i = 0; i < kOracleBlocks; i++ )
  {
    const int    size  = 16 << ( i % 3 );
    const Frame& frame = frames[rng.below( frames.size() )];
    const int    x     = static_cast<int>( rng.below( static_cast<uint64_t>( frame.width / size ) ) ) * size;
    const int    y     = static_cast<int>( rng.below( static_cast<uint64_t>( frame.height / size ) ) ) * size;
    const int    qp    = kTestQps[rng.below( kTestQps.size() )];
    const auto   block = extractBlock( frame, x, y, size );
    const auto   node  = rdQuadTreeSearch( block, { qp } );
    if( !nodesAgree( node, reference::CostTable( frame, x, y, size, qp ), nodes ) )
    {
      mismatched++;
    }
    if( !( labelPartition( block, { qp } ) == toPartitionTree( node ) ) )
    {
      mismatched++;
    }
  }
  o.require( mismatched == 0, std::to_string( mismatched ) + " blocks disagree with the enumeration" );
  o.note( std::to_string( kOracleBlocks ) + " blocks, " + std::to_string( nodes ) + " decision nodes" );

  const std::vector<Frame> fixed( frames.begin(), frames.begin() + std::min<size_t>( frames.size(), kMonotoneFrames ) );
  o.require( fixed.size() == kMonotoneFrames, "desk corpus has fewer than 20 frames" );
  uint64_t    previous = UINT64_MAX;
  std::string counts;
  for( const int qp: kTestQps )
  {
    const auto corpus = labelCorpus( fixed, { qp } );
    uint64_t   splits = 0;
    for( const int size: { 64, 32, 16 } )
    {
      splits += classCounts( corpus.forSize( size ) ).split;
    }
    o.require( splits <= previous, "split count rises with QP" );
    previous = splits;
    counts += ( counts.empty() ? "" : "/" ) + std::to_string( splits );
  }
  o.note( "splits at QP 22/27/32/37: " + counts );
}

// ---- 6: learning -----------------------------------------------------------------------

struct RunPlan
{
  int      cuSize;
  uint64_t steps;
  int      batch;
  double   lr;
  uint32_t period;
  uint32_t monitor;
  double   eta = 0.0;
};

TrainConfig configFor( const RunPlan& plan, uint64_t seed )
{
  TrainConfig c;
  c.cuSize               = plan.cuSize;
  c.steps                = plan.steps;
  c.batchSize            = plan.batch;
  c.learningRate         = plan.lr;
  c.weights.eta          = plan.eta;
  c.weights.updatePeriod = plan.period;
  c.monitorSize          = plan.monitor;
  c.seed                 = seed;
  return c;
}

void criterionLearning( const Context& ctx, Outcome& o )
{
  // toy separable set: constant blocks vs checkerboards
  const RunPlan toyPlans[] = { { 16, 40, 8, 0.02, 4, 64 }, { 32, 60, 8, 0.02, 60, 16 }, { 64, 80, 8, 0.05, 80, 16 } };
  for( const auto& plan: toyPlans )
  {
    const auto data  = makeToyDataset( plan.cuSize, 80, 7 );
    const auto split = splitDataset( data, 0.25, 3 );
    const auto r     = train( configFor( plan, 3 ), split.train, split.holdout );
    o.require( r.holdout.accuracy() == 1.0,
               fmt( "toy %.0f: holdout accuracy %.2f%%", plan.cuSize, 100.0 * r.holdout.accuracy() ) );
    o.note( fmt( "toy %.0f %.1f%%", plan.cuSize, 100.0 * r.holdout.accuracy() ) );
  }

  // oracle-labelled desk corpus
  const auto frames = deskFrames( ctx );
  o.require( static_cast<int>( frames.size() ) >= kMinDeskFrames, "desk corpus has fewer than 50 frames" );
  const auto corpus = labelCorpus( frames, { ctx.qp } );

  const RunPlan deskPlans[] = { { 64, 200, 8, 0.02, 25, 64, 0.2 }, { 32, 500, 8, 0.02, 125, 128, 0.5 },
                                { 16, 800, 8, 0.02, 100, 256, 0.2 } };
  ModelSet      trained;
  for( const auto& plan: deskPlans )
  {
    const auto split = splitDataset( corpus.forSize( plan.cuSize ), 0.2, 1 );
    const auto r     = train( configFor( plan, 1 ), split.train, split.holdout );
    const auto& c    = r.holdout;
    o.require( c.accuracy() >= c.majorityBaseline() + kBaselineMargin,
               fmt( "desk %.0f: accuracy %.2f%% vs baseline %.2f%% (needs +10 points)", plan.cuSize,
                    100.0 * c.accuracy(), 100.0 * c.majorityBaseline() ) );
    o.note( fmt( "desk %.0f acc %.1f%% base %.1f%% minority recall %.1f%%", plan.cuSize, 100.0 * c.accuracy(),
                 100.0 * c.majorityBaseline(), 100.0 * c.minorityRecall() ) );
    trained.forSize( plan.cuSize ) = r.model;

    if( plan.cuSize == 16 )
    {
      RunPlan    frozenPlan = plan;
      frozenPlan.eta        = 0.0;
      const auto frozen     = train( configFor( frozenPlan, 1 ), split.train, split.holdout );
      o.require( c.minorityRecall() > frozen.holdout.minorityRecall(),
                 fmt( "adaptive minority recall %.2f%% not above frozen %.2f%%", 100.0 * c.minorityRecall(),
                      100.0 * frozen.holdout.minorityRecall() ) );
      o.note( fmt( "frozen 16 acc %.1f%% minority recall %.1f%%", 100.0 * frozen.holdout.accuracy(),
                   100.0 * frozen.holdout.minorityRecall() ) );
    }
  }
  if( !ctx.modelDir.empty() )
  {
    saveModelSet( ctx.modelDir, trained );
  }
}

// ---- 7: time saving ---------------------------------------------------------------------

void criterionTiming( const Context& ctx, Outcome& o )
{
  ModelSet models;
  if( !ctx.modelDir.empty() && fs::exists( ctx.modelDir / modelFileName( 16 ) ) )
  {
    models = loadModelSet( ctx.modelDir );
    o.note( "trained models" );
  }
  else
  {
    models.cu64 = buildTopology( 64, 1 );
    models.cu32 = buildTopology( 32, 1 );
    models.cu16 = buildTopology( 16, 1 );
    o.note( "untrained models" );
  }
  const CnnClassifier cnn( std::move( models ) );

  const auto frames = deskFrames( ctx );
  EvalConfig config;
  config.qp         = { ctx.qp };
  const auto report = evaluate( frames, cnn, config );
  const double ts   = timeSaving( report.originalSeconds, report.proposedSeconds );
  o.require( report.timed, "evaluation was not timed" );
  o.require( report.proposedSeconds < report.originalSeconds,
             fmt( "two-stage %.2f s is not faster than the oracle %.2f s", report.proposedSeconds,
                  report.originalSeconds ) );
  o.require( ts > 0.0, fmt( "time saving %.2f%% is not positive", ts ) );
  o.note( fmt( "oracle %.2f s, two-stage %.2f s, TS %.2f%%, %.0f classifier calls", report.originalSeconds,
               report.proposedSeconds, ts, static_cast<double>( report.classifierCalls ) ) );

  std::vector<Frame> smooth;
  for( int i = 0; i < 8; i++ )
  {
    smooth.push_back( makeSmoothFrame( 256, 192, 100 + i, i ) );
  }
  const auto s = evaluate( smooth, cnn, config );
  o.require( s.earlyTerminatedFraction() > kSmoothEtFloor,
             fmt( "smooth early-termination fraction %.2f%%", 100.0 * s.earlyTerminatedFraction() ) );
  o.note( fmt( "smooth ET %.1f%%", 100.0 * s.earlyTerminatedFraction() ) );
}

// ---- 8: determinism and files --------------------------------------------------------------

std::string modelBytes( const CnnModel& model )
{
  std::ostringstream out;
  writeModel( out, model );
  return out.str();
}

void criterionDeterminism( const Context& ctx, Outcome& o )
{
  for( const int size: { 64, 32, 16 } )
  {
    o.require( modelBytes( buildTopology( size, 42 ) ) == modelBytes( buildTopology( size, 42 ) ),
               "initialization is not reproducible" );
  }

  const auto    frames = deskFrames( ctx );
  const auto    corpus = labelCorpus( std::vector<Frame>( frames.begin(), frames.begin() + 4 ), { ctx.qp } );
  const RunPlan plan{ 16, 6, 4, 0.02, 3, 16, 0.5 };
  const auto    a = train( configFor( plan, 9 ), corpus.cu16, {} );
  const auto    b = train( configFor( plan, 9 ), corpus.cu16, {} );
  o.require( modelBytes( a.model ) == modelBytes( b.model ), "identical training runs differ" );

  const auto         bytes = modelBytes( a.model );
  std::istringstream in( bytes );
  o.require( modelBytes( readModel( in ) ) == bytes, "model file does not round-trip" );

  for( const int size: { 64, 32, 16 } )
  {
    const Dataset      ds{ size, ctx.qp, corpus.forSize( size ) };
    std::ostringstream first;
    writeDataset( first, ds );
    std::istringstream back( first.str() );
    std::ostringstream second;
    writeDataset( second, readDataset( back ) );
    o.require( first.str() == second.str(), "dataset file does not round-trip" );
  }

  const auto again = labelCorpus( std::vector<Frame>( frames.begin(), frames.begin() + 4 ), { ctx.qp }, 2 );
  bool       same  = true;
  for( const int size: { 64, 32, 16 } )
  {
    const auto& x = corpus.forSize( size );
    const auto& y = again.forSize( size );
    same          = same && x.size() == y.size();
    for( size_t i = 0; same && i < x.size(); i++ )
    {
      same = x[i].splitFlag == y[i].splitFlag && x[i].block.samples == y[i].block.samples;
    }
  }
  o.require( same, "parallel labelling differs from sequential labelling" );
}

// ---------------------------------------------------------------------------------------------

const std::function<void( const Context&, Outcome& )> kCriteria[9] = {
  nullptr, criterionLoss, criterionGradients, criterionShapes, criterionFilter,
  criterionOracle, criterionLearning, criterionTiming, criterionDeterminism
};

const char* const kTitles[9] = { "",
                                 "loss and weight update exactness",
                                 "gradient correctness",
                                 "topology shapes",
                                 "filter semantics",
                                 "oracle soundness",
                                 "learning sanity",
                                 "time saving",
                                 "determinism and round-trips" };

bool runCriterion( int id, const Context& ctx )
{
  Outcome    outcome;
  const auto start = std::chrono::steady_clock::now();
  try
  {
    kCriteria[id]( ctx, outcome );
  }
  catch( const std::exception& e )
  {
    outcome.require( false, std::string( "exception: " ) + e.what() );
  }
  const double seconds = std::chrono::duration<double>( std::chrono::steady_clock::now() - start ).count();
  outcome.require( seconds < kRuntimeLimit[id], fmt( "runtime %.1f s over the %.0f s limit", seconds, kRuntimeLimit[id] ) );

  const bool pass = outcome.failures.empty();
  std::printf( "criterion %d %s: %s (%.1f s)\n", id, kTitles[id], pass ? "PASS" : "FAIL", seconds );
  for( const auto& f: outcome.failures )
  {
    std::printf( "    fail: %s\n", f.c_str() );
  }
  for( const auto& n: outcome.notes )
  {
    std::printf( "    note: %s\n", n.c_str() );
  }
  std::fflush( stdout );
  return pass;
}

} // namespace

int main( int argc, char** argv )
{
  CLI::App         app{ "acceptance checks" };
  std::vector<int> ids;
  Context          ctx;
  ctx.dataDir = CUPART_DATA_DIR;
  app.add_option( "--criterion", ids, "criterion number(s), default all" )->check( CLI::Range( 1, 8 ) );
  app.add_option( "--data", ctx.dataDir, "data directory holding desk/" );
  app.add_option( "--models", ctx.modelDir, "where learning writes and timing reads the trained models" );
  app.add_option( "--qp", ctx.qp, "quantization parameter of the desk labels" );
  CLI11_PARSE( app, argc, argv );
  if( ids.empty() )
  {
    ids = { 1, 2, 3, 4, 5, 6, 7, 8 };
  }
  bool all = true;
  for( const int id: ids )
  {
    all = runCriterion( id, ctx ) && all;
  }
  return all ? 0 : 1;
}
