// Copyright 2026 The Privscope Authors.
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

'use strict';
const Kinesis = require('aws-sdk/clients/kinesis');

const kinesis = new Kinesis();

module.exports.handler = async (event) => {
  for (const click of event.clicks) {
    await kinesis
      .putRecord({ StreamName: 'clickstream', PartitionKey: click.user, Data: JSON.stringify(click) })
      .promise();
  }
};
