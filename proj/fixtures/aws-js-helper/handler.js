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
const s3 = new AWS.S3();

function save(bucket, key, body) {
  return s3.putObject({ Bucket: bucket, Key: key, Body: body }).promise();
}

exports.handler = async (event) => {
  await save('backups', 'daily.tar', event.archive);
  await s3.deleteObject({ Bucket: 'backups', Key: 'daily.tar.old' }).promise();
};
