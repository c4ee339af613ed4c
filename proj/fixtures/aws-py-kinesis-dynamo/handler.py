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

import os

import boto3

kinesis = boto3.client("kinesis")
dynamodb = boto3.client("dynamodb")
STREAM = "events-" + os.environ["STAGE"]


def handler(event, context):
    for record in event["records"]:
        kinesis.put_record(StreamName=STREAM, Data=record["body"], PartitionKey=record["id"])
    dynamodb.update_item(
        TableName="counters",
        Key={"name": {"S": "records"}},
        UpdateExpression="ADD n :k",
        ExpressionAttributeValues={":k": {"N": str(len(event["records"]))}},
    )
