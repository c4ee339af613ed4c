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

package main

import (
	"encoding/json"

	"github.com/aws/aws-sdk-go/aws"
	"github.com/aws/aws-sdk-go/aws/session"
	"github.com/aws/aws-sdk-go/service/lambda"
)

var client = lambda.New(session.Must(session.NewSession()))

func resize(key string) error {
	payload, _ := json.Marshal(map[string]string{"key": key})
	_, err := client.Invoke(&lambda.InvokeInput{
		FunctionName:   aws.String("resize"),
		InvocationType: aws.String("Event"),
		Payload:        payload,
	})
	return err
}
