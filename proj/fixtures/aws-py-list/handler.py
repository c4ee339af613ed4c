# Copyright 2026 The Privscope Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import boto3

s3 = boto3.client("s3")


def handler(event, context):
    resp = s3.list_objects_v2(Bucket="logs", Prefix=event.get("prefix", ""))
    return [o["Key"] for o in resp.get("Contents", [])]
