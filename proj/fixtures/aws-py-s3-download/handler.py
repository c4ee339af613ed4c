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
_model = None


def load():
    global _model
    if _model is None:
        s3.download_file("models", "v1/model.bin", "/tmp/model.bin")
        _model = open("/tmp/model.bin", "rb").read()
    return _model


def handler(event, context):
    return len(load())
