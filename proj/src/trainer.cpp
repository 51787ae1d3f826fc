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

/** \file     trainer.cpp
    \brief    dataset splitting, SGD training with adaptive loss weights, class statistics
*/

#include "cupart/Trainer.hpp"
#include "cupart/Error.hpp"
#include "cupart/Random.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <sstream>

namespace cupart
{

namespace
{

constexpr uint64_t kSamplingSeedSalt = 0x9E3779B97F4A7C15ull;
constexpr uint64_t kMonitorSeedSalt  = 0xC2B2AE3D27D4EB4Full;

std::vector<size_t> shuffledIndices( size_t n, uint64_t seed )
{
  std::vector<size_t> order( n );
  std::iota( order.begin(), order.end(), size_t{ 0 } );
  Rng rng( seed );
  for( size_t i = n; i > 1; i-- )
  {
    std::swap( order[i - 1], order[rng.below( i )] );
  }
  return order;
}

struct BatchPrediction
{
  std::vector<double>  splitProb;
  std::vector<uint8_t> labels;
};

BatchPrediction predictRecords( const CnnModel& model, const std::vector<const LabeledBlock*>& records,
                                int batchSize )
{
  BatchPrediction out;
  for( size_t begin = 0; begin < records.size(); begin += batchSize )
  {
    const size_t                   end = std::min( records.size(), begin + static_cast<size_t>( batchSize ) );
    std::vector<const LumaBlock*> blocks;
    for( size_t i = begin; i < end; i++ )
    {
      blocks.push_back( &records[i]->block );
      out.labels.push_back( records[i]->splitFlag );
    }
    for( const auto& p: model.predict( blocks ) )
    {
      out.splitProb.push_back( p.split );
    }
  }
  return out;
}

std::filesystem::path checkpointPath( const TrainConfig& config, uint64_t step, bool final )
{
  const std::string size = std::to_string( config.cuSize );
  if( final )
  {
    return config.checkpointDir / ( "cu" + size + ".cupm" );
  }
  char name[64];
  std::snprintf( name, sizeof( name ), "cu%s_step%07llu.cupm", size.c_str(), static_cast<unsigned long long>( step ) );
  return config.checkpointDir / name;
}

} // namespace

ClassCounts classCounts( const std::vector<LabeledBlock>& records )
{
  ClassCounts counts;
  for( const auto& r: records )
  {
    ( r.splitFlag ? counts.split : counts.nonSplit )++;
  }
  return counts;
}

DatasetSplit splitDataset( const std::vector<LabeledBlock>& records, double holdoutFraction, uint64_t seed )
{
  if( records.size() < 10 )
  {
    throw Error( "splitting needs at least 10 records, got " + std::to_string( records.size() ) );
  }
  if( !( holdoutFraction > 0.0 && holdoutFraction < 1.0 ) )
  {
    throw Error( "holdout fraction must lie strictly between 0 and 1" );
  }
  const auto   order   = shuffledIndices( records.size(), seed );
  const size_t holdout = static_cast<size_t>( std::llround( records.size() * holdoutFraction ) );
  DatasetSplit split;
  for( size_t i = 0; i < order.size(); i++ )
  {
    ( i < order.size() - holdout ? split.train : split.holdout ).push_back( records[order[i]] );
  }
  split.trainCounts   = classCounts( split.train );
  split.holdoutCounts = classCounts( split.holdout );
  return split;
}

Confusion evaluateModel( const CnnModel& model, const std::vector<LabeledBlock>& records, double tau, int batchSize )
{
  std::vector<const LabeledBlock*> refs;
  for( const auto& r: records )
  {
    refs.push_back( &r );
  }
  const auto pred = predictRecords( model, refs, batchSize );
  Confusion  confusion;
  for( size_t i = 0; i < refs.size(); i++ )
  {
    confusion.add( pred.labels[i], pred.splitProb[i] > tau );
  }
  return confusion;
}

TrainResult train( const TrainConfig& config, const std::vector<LabeledBlock>& trainSet,
                   const std::vector<LabeledBlock>& holdout )
{
  if( !isDecisionSize( config.cuSize ) )
  {
    throw Error( "training needs a CU size of 64, 32 or 16" );
  }
  if( config.batchSize < 1 || !( config.learningRate > 0.0 ) || config.weights.updatePeriod == 0 )
  {
    throw Error( "batch size, learning rate and update period must be positive" );
  }
  if( trainSet.size() < static_cast<size_t>( config.batchSize ) )
  {
    throw Error( "training set smaller than one batch" );
  }
  const auto counts = classCounts( trainSet );
  if( counts.nonSplit == 0 || counts.split == 0 )
  {
    throw Error( "training set holds a single class" );
  }
  for( const auto* set: { &trainSet, &holdout } )
  {
    for( const auto& r: *set )
    {
      if( r.block.size != config.cuSize )
      {
        throw ShapeError( "record of size " + std::to_string( r.block.size ) + " in a "
                          + std::to_string( config.cuSize ) + "x" + std::to_string( config.cuSize ) + " dataset" );
      }
    }
  }

  TrainResult result;
  result.model        = buildTopology( config.cuSize, config.seed );
  result.finalWeights = config.weights;
  auto& model         = result.model;
  auto& weights       = result.finalWeights;

  std::vector<const LabeledBlock*> monitor;
  {
    const auto order = shuffledIndices( trainSet.size(), config.seed ^ kMonitorSeedSalt );
    for( size_t i = 0; i < std::min<size_t>( order.size(), config.monitorSize ); i++ )
    {
      monitor.push_back( &trainSet[order[i]] );
    }
  }
  if( !config.checkpointDir.empty() )
  {
    std::filesystem::create_directories( config.checkpointDir );
  }

  Rng    sampler( config.seed ^ kSamplingSeedSalt );
  double lossSum   = 0.0;
  size_t lossCount = 0;
  auto   flushRow  = [&]( uint64_t step ) {
    TrainLogRow row;
    row.step   = step;
    row.loss   = lossCount ? lossSum / lossCount : std::numeric_limits<double>::quiet_NaN();
    row.alpha0 = weights.alpha0;
    row.alpha1 = weights.alpha1;
    lossSum    = 0.0;
    lossCount  = 0;
    return row;
  };

  for( uint64_t step = 1; step <= config.steps; step++ )
  {
    std::vector<const LumaBlock*> blocks;
    std::vector<uint8_t>          labels;
    for( int i = 0; i < config.batchSize; i++ )
    {
      const auto& r = trainSet[sampler.below( trainSet.size() )];
      blocks.push_back( &r.block );
      labels.push_back( r.splitFlag );
    }
    double loss = 0.0;
    try
    {
      const Tensor        probs = model.forwardTrain( makeInputBatch( blocks, config.cuSize ) );
      std::vector<double> splitProb( blocks.size() );
      for( size_t i = 0; i < blocks.size(); i++ )
      {
        splitProb[i] = probs[2 * i + 1];
      }
      loss = weightedLoss( splitProb, labels, weights );
      if( std::isnan( loss ) )
      {
        throw TrainingDiverged( step, "loss became NaN" );
      }
      const auto grad = lossGradient( splitProb, labels, weights );
      Tensor     upstream( probs.shape() );
      for( size_t i = 0; i < blocks.size(); i++ )
      {
        upstream[2 * i + 1] = grad[i];
      }
      model.zeroGrad();
      model.backward( upstream );
      model.sgdStep( config.learningRate );
    }
    catch( const NumericError& e )
    {
      throw TrainingDiverged( step, e.what() );
    }
    lossSum += loss;
    lossCount++;

    if( step % config.weights.updatePeriod == 0 )
    {
      const auto pred = predictRecords( model, monitor, 32 );
      uint64_t   n1   = 0;
      for( const double p: pred.splitProb )
      {
        n1 += p > 0.5;
      }
      const uint64_t n0 = pred.splitProb.size() - n1;
      TrainLogRow    row = flushRow( step );
      row.n0          = n0;
      row.n1          = n1;
      row.monitorLoss = weightedLoss( pred.splitProb, pred.labels, weights );
      if( !std::isfinite( row.monitorLoss ) )
      {
        throw TrainingDiverged( step, "monitoring loss is not finite" );
      }
      const auto update = updateWeights( weights, n0, n1 );
      weights           = update.weights;
      row.degenerate    = update.degenerate;
      result.degenerateUpdates += update.degenerate;
      result.log.push_back( row );
    }
    if( !config.checkpointDir.empty() && step % config.checkpointPeriod == 0 && step != config.steps )
    {
      const auto path = checkpointPath( config, step, false );
      saveModel( path, model );
      result.checkpoints.push_back( path );
    }
  }

  if( result.log.empty() || result.log.back().step != config.steps )
  {
    result.log.push_back( flushRow( config.steps ) );
  }
  if( !holdout.empty() )
  {
    result.holdout                     = evaluateModel( model, holdout );
    result.log.back().holdoutAccuracy = result.holdout.accuracy();
  }
  if( !config.checkpointDir.empty() )
  {
    const auto path = checkpointPath( config, config.steps, true );
    saveModel( path, model );
    result.checkpoints.push_back( path );
  }
  return result;
}

TrainResult train( const TrainConfig& config, const Dataset& dataset )
{
  if( dataset.cuSize != config.cuSize )
  {
    throw Error( "dataset CU size does not match the training configuration" );
  }
  const auto split = splitDataset( dataset.records, config.holdoutFraction, config.seed );
  return train( config, split.train, split.holdout );
}

void writeTrainLogCsv( std::ostream& out, const std::vector<TrainLogRow>& log )
{
  auto cell = [&out]( double v ) {
    if( std::isfinite( v ) )
    {
      out << v;
    }
  };
  out << "step,loss,alpha0,alpha1,n0,n1,monitor_loss,holdout_accuracy,degenerate\n";
  out.precision( 10 );
  for( const auto& row: log )
  {
    out << row.step << ',';
    cell( row.loss );
    out << ',' << row.alpha0 << ',' << row.alpha1 << ',' << row.n0 << ',' << row.n1 << ',';
    cell( row.monitorLoss );
    out << ',';
    cell( row.holdoutAccuracy );
    out << ',' << ( row.degenerate ? 1 : 0 ) << '\n';
  }
}

std::string formatRatio( uint64_t nonSplit, uint64_t split )
{
  if( split == 0 )
  {
    return "inf";
  }
  char text[32];
  std::snprintf( text, sizeof( text ), "%.2f", static_cast<double>( nonSplit ) / static_cast<double>( split ) );
  return text;
}

std::string formatClassTable( const std::vector<ClassStatsRow>& rows )
{
  std::ostringstream out;
  char               line[128];
  std::snprintf( line, sizeof( line ), "%-8s %12s %12s %6s %12s\n", "CU", "non-split", "split", "NS/S", "total" );
  out << line;
  for( const auto& row: rows )
  {
    const std::string cu = std::to_string( row.cuSize ) + "x" + std::to_string( row.cuSize );
    std::snprintf( line, sizeof( line ), "%-8s %12llu %12llu %6s %12llu\n", cu.c_str(),
                   static_cast<unsigned long long>( row.counts.nonSplit ),
                   static_cast<unsigned long long>( row.counts.split ),
                   formatRatio( row.counts.nonSplit, row.counts.split ).c_str(),
                   static_cast<unsigned long long>( row.counts.total() ) );
    out << line;
  }
  return out.str();
}

} // namespace cupart
