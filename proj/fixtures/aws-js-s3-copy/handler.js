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

const AWS = require('aws-sdk');
const s3 = new AWS.S3({ region: 'us-east-1' });

// Moves an uploaded object into the archive bucket.
exports.handler = async (event) => {
  const key = event.key;
  const obj = await s3.getObject({ Bucket: 'incoming', Key: key }).promise();
  await s3.putObject({ Bucket: 'archive', Key: `processed/${key}`, Body: obj.Body }).promise();
  return key;
};
